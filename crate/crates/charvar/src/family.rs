//! Short textual names for presentation families and sampler styles, as used
//! on the command line and in rep files.
//!
//! ```text
//! free:R  abelian:R  star:L  raag:V:0-1,1-2  free-product:2,3,0
//! finite-by-free:R:z4|q8|bd12  torus-knot:2,3
//! ```

use anyhow::{anyhow, bail, Context, Result};
use charvar_core::presentation::{FamilySpec, FiniteGroup, GraphSpec};
use charvar_core::repvar::{FiberCase, SamplerStyle};

fn int<T: std::str::FromStr>(s: &str, what: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.trim().parse().with_context(|| format!("bad {what} `{s}`"))
}

fn int_list(s: &str) -> Result<Vec<u32>> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(|t| int(t, "integer")).collect()
}

fn need<'a>(x: Option<&'a str>, family: &str) -> Result<&'a str> {
    x.ok_or_else(|| anyhow!("family `{family}` is missing a parameter"))
}

pub fn parse_family(s: &str) -> Result<FamilySpec> {
    let mut parts = s.splitn(3, ':');
    let kind = parts.next().unwrap_or_default();
    let a = parts.next();
    let b = parts.next();
    Ok(match kind {
        "free" => FamilySpec::Free { rank: int(need(a, s)?, "rank")? },
        "abelian" => FamilySpec::Abelian { rank: int(need(a, s)?, "rank")? },
        "star" => FamilySpec::StarRaag { leaves: int(need(a, s)?, "leaf count")? },
        "raag" => {
            let v = int(need(a, s)?, "vertex count")?;
            let mut edges = Vec::new();
            for e in b.unwrap_or("").split(',').filter(|e| !e.trim().is_empty()) {
                let (x, y) = e.split_once('-').ok_or_else(|| anyhow!("bad edge `{e}`"))?;
                edges.push((int(x, "vertex")?, int(y, "vertex")?));
            }
            FamilySpec::Raag(GraphSpec::new(v, &edges)?)
        }
        "free-product" => FamilySpec::FreeProduct { orders: int_list(need(a, s)?)? },
        "finite-by-free" => {
            let finite = need(b, s)?;
            FamilySpec::DirectWithFinite {
                free_rank: int(need(a, s)?, "rank")?,
                finite: FiniteGroup::from_name(finite).ok_or_else(|| anyhow!("unknown finite group `{finite}`"))?,
            }
        }
        "torus-knot" => FamilySpec::TorusKnot { exponents: int_list(need(a, s)?)? },
        _ => bail!("unknown family `{kind}`"),
    })
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub fn format_family(spec: &FamilySpec) -> String {
    match spec {
        FamilySpec::Free { rank } => format!("free:{rank}"),
        FamilySpec::Abelian { rank } => format!("abelian:{rank}"),
        FamilySpec::StarRaag { leaves } => format!("star:{leaves}"),
        FamilySpec::Raag(g) => {
            let edges: Vec<String> = g.edges().iter().map(|(x, y)| format!("{x}-{y}")).collect();
            format!("raag:{}:{}", g.vertex_count(), edges.join(","))
        }
        FamilySpec::FreeProduct { orders } => format!("free-product:{}", join(orders)),
        FamilySpec::DirectWithFinite { free_rank, finite } => format!("finite-by-free:{free_rank}:{}", finite.name()),
        FamilySpec::TorusKnot { exponents } => format!("torus-knot:{}", join(exponents)),
    }
}

pub fn parse_style(s: &str) -> Result<SamplerStyle> {
    Ok(match s.split_once(':') {
        None if s == "free" => SamplerStyle::Free,
        None if s == "abelian-diagonal" => SamplerStyle::AbelianDiagonal,
        None if s == "finite-by-free" => SamplerStyle::FiniteByFree,
        Some(("angle-fiber", case)) => {
            SamplerStyle::AngleFiber(FiberCase::from_label(case).ok_or_else(|| anyhow!("unknown fiber case `{case}`"))?)
        }
        _ => bail!("unknown sampler style `{s}`"),
    })
}

/// Sampler that fits the family when none is requested.
pub fn default_style(spec: &FamilySpec) -> SamplerStyle {
    match spec {
        FamilySpec::Free { .. } => SamplerStyle::Free,
        FamilySpec::StarRaag { .. } => SamplerStyle::AngleFiber(FiberCase::Regular),
        FamilySpec::DirectWithFinite { .. } => SamplerStyle::FiniteByFree,
        _ => SamplerStyle::AbelianDiagonal,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for s in ["free:2", "abelian:3", "star:2", "raag:4:0-1,1-2", "raag:3:", "free-product:2,3", "finite-by-free:2:z4", "torus-knot:2,3"] {
            assert_eq!(format_family(&parse_family(s).unwrap()), s);
        }
        assert!(parse_family("star").is_err());
        assert!(parse_family("finite-by-free:2:z5").is_err());
        assert!(parse_family("mobius:2").is_err());
    }

    #[test]
    fn styles() {
        assert_eq!(parse_style("angle-fiber:jordan").unwrap(), SamplerStyle::AngleFiber(FiberCase::Jordan));
        assert_eq!(parse_style("free").unwrap(), SamplerStyle::Free);
        assert!(parse_style("angle-fiber:parabolic").is_err());
    }
}
