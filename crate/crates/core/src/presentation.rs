//! Finite group presentations `⟨a₁,…,a_r | R₁,…,R_m⟩`.
//!
//! Text grammar (whitespace is insignificant):
//!
//! ```text
//! presentation := '<' names '|' relators? '>'
//! names        := ident (',' ident)*
//! relators     := word (',' word)*
//! word         := factor ('*' factor)*
//! factor       := atom ('^' integer)?
//! atom         := ident | '[' word ',' word ']' | '(' word ')'
//! ```
//!
//! `[u,v]` expands to `u·v·u⁻¹·v⁻¹`. Generators are marked in declaration
//! order and relators are kept in input order.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::matgroup::{MatC, MatError};

/// Largest allowed absolute exponent on a single letter.
pub const MAX_EXPONENT: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("syntax error at byte {position}: expected {expected}")]
    Syntax { position: usize, expected: String },
    #[error("unknown generator `{name}` at byte {position}")]
    UnknownGenerator { name: String, position: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("word uses generator {index} but only {available} images were given")]
    MissingImage { index: usize, available: usize },
    #[error(transparent)]
    Matrix(#[from] MatError),
}

/// One letter `a_gen^exp` of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub exp: i64,
}

/// A word in the generators, stored as a list of letters with nonzero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    /// Builds a word from `(generator, exponent)` pairs, dropping zero exponents.
    /// The result is not reduced; see [`free_reduce`].
    pub fn from_pairs<I: IntoIterator<Item = (usize, i64)>>(pairs: I) -> Self {
        Word {
            letters: pairs
                .into_iter()
                .filter(|&(_, e)| e != 0)
                .map(|(gen, exp)| Letter { gen, exp })
                .collect(),
        }
    }

    pub fn generator(gen: usize) -> Self {
        Word::from_pairs([(gen, 1)])
    }

    /// `[x, y] = x·y·x⁻¹·y⁻¹` as a reduced word.
    pub fn commutator(x: &Word, y: &Word) -> Self {
        free_reduce(&x.concat(y).concat(&x.inverse()).concat(&y.inverse()))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { gen: l.gen, exp: -l.exp })
                .collect(),
        }
    }

    /// `w^k`, with `k` possibly negative.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.letters.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        Word { letters }
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    pub fn max_abs_exponent(&self) -> i64 {
        self.letters.iter().map(|l| l.exp.abs()).max().unwrap_or(0)
    }

    /// True when adjacent letters never share a generator.
    pub fn is_reduced(&self) -> bool {
        self.letters.windows(2).all(|w| w[0].gen != w[1].gen) && self.letters.iter().all(|l| l.exp != 0)
    }

    /// Recognizes `x·y·x⁻¹·y⁻¹` for single generators `x ≠ y`.
    pub fn as_generator_commutator(&self) -> Option<(usize, usize)> {
        match self.letters.as_slice() {
            [a, b, c, d]
                if a.exp == 1 && b.exp == 1 && c.exp == -1 && d.exp == -1 && a.gen == c.gen && b.gen == d.gen =>
            {
                Some((a.gen, b.gen))
            }
            _ => None,
        }
    }
}

/// Free reduction: cancels `x^a·x^b` into `x^{a+b}` until no two adjacent letters
/// share a generator.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.letters.len());
    for &l in &w.letters {
        if l.exp == 0 {
            continue;
        }
        match out.last_mut() {
            Some(top) if top.gen == l.gen => {
                top.exp += l.exp;
                if top.exp == 0 {
                    out.pop();
                }
            }
            _ => out.push(l),
        }
    }
    Word { letters: out }
}

/// A finite simple graph on `vertex_count` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSpec {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl GraphSpec {
    /// Edges are normalized to `(min, max)`, sorted and deduplicated.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self, PresentationError> {
        if vertex_count == 0 {
            return Err(PresentationError::InvalidParams("graph needs at least one vertex".into()));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == v {
                return Err(PresentationError::InvalidParams(format!("self-loop at vertex {u}")));
            }
            if u >= vertex_count || v >= vertex_count {
                return Err(PresentationError::InvalidParams(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(GraphSpec { vertex_count, edges: norm })
    }

    pub fn complete(vertex_count: usize) -> Result<Self, PresentationError> {
        let mut edges = Vec::new();
        for i in 0..vertex_count {
            for j in i + 1..vertex_count {
                edges.push((i, j));
            }
        }
        GraphSpec::new(vertex_count, &edges)
    }

    /// Star with centre 0 and leaves `1..=leaves`.
    pub fn star(leaves: usize) -> Result<Self, PresentationError> {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        GraphSpec::new(leaves + 1, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// The finite subgroups of `SU(2)` shipped as `b`-image pools for direct
/// products with a finite group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiniteGroup {
    /// `ℤ₄ = ⟨b | b⁴⟩`
    Cyclic4,
    /// `Q₈ = ⟨i, j | i⁴, i²j⁻², j⁻¹ij i⟩`
    Quaternion8,
    /// Binary dihedral group of order 12, `⟨x, y | x⁶, x³y⁻², y⁻¹xy x⟩`
    BinaryDihedral12,
}

impl FiniteGroup {
    pub fn name(self) -> &'static str {
        match self {
            FiniteGroup::Cyclic4 => "z4",
            FiniteGroup::Quaternion8 => "q8",
            FiniteGroup::BinaryDihedral12 => "bd12",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "z4" => Some(FiniteGroup::Cyclic4),
            "q8" => Some(FiniteGroup::Quaternion8),
            "bd12" => Some(FiniteGroup::BinaryDihedral12),
            _ => None,
        }
    }

    pub fn order(self) -> usize {
        match self {
            FiniteGroup::Cyclic4 => 4,
            FiniteGroup::Quaternion8 => 8,
            FiniteGroup::BinaryDihedral12 => 12,
        }
    }

    pub fn generator_count(self) -> usize {
        match self {
            FiniteGroup::Cyclic4 => 1,
            _ => 2,
        }
    }

    /// Relators in local generator indices `0..generator_count()`.
    pub fn relators(self) -> Vec<Word> {
        let x = Word::generator(0);
        let y = Word::generator(1);
        let raw = match self {
            FiniteGroup::Cyclic4 => vec![x.pow(4)],
            FiniteGroup::Quaternion8 => vec![
                x.pow(4),
                x.pow(2).concat(&y.pow(-2)),
                y.inverse().concat(&x).concat(&y).concat(&x),
            ],
            FiniteGroup::BinaryDihedral12 => vec![
                x.pow(6),
                x.pow(3).concat(&y.pow(-2)),
                y.inverse().concat(&x).concat(&y).concat(&x),
            ],
        };
        raw.iter().map(free_reduce).collect()
    }
}

/// Family the presentation was built from; parsed text is `Custom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyTag {
    Free,
    Abelian,
    Raag(GraphSpec),
    /// Star RAAG with the distinguished vertex at generator 0.
    StarRaag,
    /// Free product of cyclic groups (order 0 means infinite cyclic).
    FreeProduct(Vec<u32>),
    /// `F_r × F`: generators `a₁…a_r` then the finite group's `b`'s.
    DirectWithFinite { free_rank: usize, finite: FiniteGroup },
    TorusKnot(Vec<u32>),
    Custom,
}

/// Parameters for [`build_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Free { rank: usize },
    Abelian { rank: usize },
    Raag(GraphSpec),
    /// Star RAAG of rank `leaves + 1`.
    StarRaag { leaves: usize },
    FreeProduct { orders: Vec<u32> },
    DirectWithFinite { free_rank: usize, finite: FiniteGroup },
    TorusKnot { exponents: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupPresentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
    family: FamilyTag,
}

impl GroupPresentation {
    /// Validates generator indices, reduces relators and checks names are distinct.
    pub fn new(
        generator_names: Vec<String>,
        relators: Vec<Word>,
        family: FamilyTag,
    ) -> Result<Self, PresentationError> {
        for (i, name) in generator_names.iter().enumerate() {
            if generator_names[..i].contains(name) {
                return Err(PresentationError::InvalidParams(format!("duplicate generator `{name}`")));
            }
        }
        let relators: Vec<Word> = relators.iter().map(free_reduce).collect();
        for r in &relators {
            if let Some(g) = r.max_generator() {
                if g >= generator_names.len() {
                    return Err(PresentationError::InvalidParams(format!(
                        "relator uses generator {g} of {}",
                        generator_names.len()
                    )));
                }
            }
            if r.max_abs_exponent() > MAX_EXPONENT {
                return Err(PresentationError::InvalidParams(format!(
                    "exponent exceeds {MAX_EXPONENT}"
                )));
            }
        }
        if let FamilyTag::Raag(graph) = &family {
            check_raag_relators(graph, generator_names.len(), &relators)?;
        }
        Ok(GroupPresentation { generator_names, relators, family })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn family(&self) -> &FamilyTag {
        &self.family
    }

    pub fn with_family(mut self, family: FamilyTag) -> Result<Self, PresentationError> {
        if let FamilyTag::Raag(graph) = &family {
            check_raag_relators(graph, self.generator_count(), &self.relators)?;
        }
        self.family = family;
        Ok(self)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name)
    }

    /// Renders a word with this presentation's generator names.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (i, l) in w.letters().iter().enumerate() {
            if i > 0 {
                s.push('*');
            }
            s.push_str(&self.generator_names[l.gen]);
            if l.exp != 1 {
                s.push_str(&format!("^{}", l.exp));
            }
        }
        s
    }
}

fn check_raag_relators(graph: &GraphSpec, gens: usize, relators: &[Word]) -> Result<(), PresentationError> {
    if graph.vertex_count() != gens {
        return Err(PresentationError::InvalidParams("graph size differs from generator count".into()));
    }
    let mut seen: Vec<(usize, usize)> = Vec::with_capacity(relators.len());
    for r in relators {
        let (i, j) = r
            .as_generator_commutator()
            .ok_or_else(|| PresentationError::InvalidParams("RAAG relator is not a commutator".into()))?;
        seen.push((i.min(j), i.max(j)));
    }
    seen.sort_unstable();
    seen.dedup();
    if seen != graph.edges() {
        return Err(PresentationError::InvalidParams("RAAG relators do not match the edge set".into()));
    }
    Ok(())
}

/// Renders in the text grammar accepted by [`parse_presentation`].
impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{} |", self.generator_names.join(","))?;
        for (i, r) in self.relators.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            match r.as_generator_commutator() {
                Some((x, y)) => write!(f, "{sep}[{},{}]", self.generator_names[x], self.generator_names[y])?,
                None => write!(f, "{sep}{}", self.format_word(r))?,
            }
        }
        write!(f, ">")
    }
}

fn indexed_names(prefix: &str, range: core::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

/// Builds a presentation from a family descriptor.
///
/// Generator marking: `a₁…a_r` for free, abelian, RAAG, free-product and torus
/// knot families; `a₀…a_r` with the distinguished vertex first for star RAAGs;
/// `a₁…a_r` followed by `b₁…b_s` for direct products with a finite group.
pub fn build_family(spec: &FamilySpec) -> Result<GroupPresentation, PresentationError> {
    match spec {
        FamilySpec::Free { rank } => {
            if *rank == 0 {
                return Err(PresentationError::InvalidParams("rank must be positive".into()));
            }
            GroupPresentation::new(indexed_names("a", 1..rank + 1), Vec::new(), FamilyTag::Free)
        }
        FamilySpec::Abelian { rank } => {
            if *rank == 0 {
                return Err(PresentationError::InvalidParams("rank must be positive".into()));
            }
            let g = GraphSpec::complete(*rank)?;
            let rel = raag_relators(&g);
            GroupPresentation::new(indexed_names("a", 1..rank + 1), rel, FamilyTag::Abelian)
        }
        FamilySpec::Raag(graph) => {
            let rel = raag_relators(graph);
            GroupPresentation::new(
                indexed_names("a", 1..graph.vertex_count() + 1),
                rel,
                FamilyTag::Raag(graph.clone()),
            )
        }
        FamilySpec::StarRaag { leaves } => {
            if *leaves == 0 {
                return Err(PresentationError::InvalidParams("star RAAG needs r ≥ 1".into()));
            }
            let g = GraphSpec::star(*leaves)?;
            GroupPresentation::new(indexed_names("a", 0..leaves + 1), raag_relators(&g), FamilyTag::StarRaag)
        }
        FamilySpec::FreeProduct { orders } => {
            if orders.is_empty() {
                return Err(PresentationError::InvalidParams("free product needs a factor".into()));
            }
            let rel = orders
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(i, &m)| Word::from_pairs([(i, m as i64)]))
                .collect();
            GroupPresentation::new(
                indexed_names("a", 1..orders.len() + 1),
                rel,
                FamilyTag::FreeProduct(orders.clone()),
            )
        }
        FamilySpec::DirectWithFinite { free_rank, finite } => {
            if *free_rank == 0 {
                return Err(PresentationError::InvalidParams("free rank must be positive".into()));
            }
            let s = finite.generator_count();
            let mut names = indexed_names("a", 1..free_rank + 1);
            names.extend(indexed_names("b", 1..s + 1));
            let mut rel = Vec::new();
            for i in 0..*free_rank {
                for j in 0..s {
                    rel.push(Word::commutator(&Word::generator(i), &Word::generator(free_rank + j)));
                }
            }
            for r in finite.relators() {
                rel.push(Word::from_pairs(r.letters().iter().map(|l| (l.gen + free_rank, l.exp))));
            }
            GroupPresentation::new(
                names,
                rel,
                FamilyTag::DirectWithFinite { free_rank: *free_rank, finite: *finite },
            )
        }
        FamilySpec::TorusKnot { exponents } => {
            if exponents.len() < 2 || exponents.iter().any(|&e| e == 0) {
                return Err(PresentationError::InvalidParams(
                    "torus knot family needs at least two positive exponents".into(),
                ));
            }
            let rel = exponents
                .windows(2)
                .enumerate()
                .map(|(i, w)| Word::from_pairs([(i, w[0] as i64), (i + 1, -(w[1] as i64))]))
                .collect();
            GroupPresentation::new(
                indexed_names("a", 1..exponents.len() + 1),
                rel,
                FamilyTag::TorusKnot(exponents.clone()),
            )
        }
    }
}

fn raag_relators(graph: &GraphSpec) -> Vec<Word> {
    graph
        .edges()
        .iter()
        .map(|&(i, j)| Word::commutator(&Word::generator(i), &Word::generator(j)))
        .collect()
}

/// Evaluates `w` on generator images, left to right; negative exponents use
/// the matrix inverse.
pub fn evaluate_word(w: &Word, images: &[MatC]) -> Result<MatC, EvalError> {
    let n = match images.first() {
        Some(m) => m.dim(),
        None if w.is_empty() => return Err(EvalError::MissingImage { index: 0, available: 0 }),
        None => {
            return Err(EvalError::MissingImage { index: w.letters()[0].gen, available: 0 });
        }
    };
    if images.iter().any(|m| m.dim() != n) {
        return Err(MatError::DimensionMismatch.into());
    }
    let mut acc = MatC::identity(n);
    let mut inverses: Vec<Option<MatC>> = vec![None; images.len()];
    for l in w.letters() {
        let base = images
            .get(l.gen)
            .ok_or(EvalError::MissingImage { index: l.gen, available: images.len() })?;
        let factor = if l.exp < 0 {
            let inv = match inverses[l.gen] {
                Some(m) => m,
                None => {
                    let m = base.inverse()?;
                    inverses[l.gen] = Some(m);
                    m
                }
            };
            inv.pow(l.exp.unsigned_abs())
        } else {
            base.pow(l.exp as u64)
        };
        acc = acc * factor;
    }
    Ok(acc)
}

/// Parses the text grammar described in the module docs.
pub fn parse_presentation(text: &str) -> Result<GroupPresentation, PresentationError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, names: Vec::new() };
    p.expect(b'<', "`<`")?;
    loop {
        let (name, at) = p.ident()?;
        if p.names.contains(&name) {
            return Err(PresentationError::InvalidParams(format!(
                "duplicate generator `{name}` at byte {at}"
            )));
        }
        p.names.push(name);
        if p.eat(b',') {
            continue;
        }
        break;
    }
    p.expect(b'|', "`,` or `|`")?;
    let mut relators = Vec::new();
    if !p.peek_is(b'>') {
        loop {
            relators.push(free_reduce(&p.word()?));
            if p.eat(b',') {
                continue;
            }
            break;
        }
    }
    p.expect(b'>', "`,` or `>`")?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("end of input"));
    }
    let names = core::mem::take(&mut p.names);
    GroupPresentation::new(names, relators, FamilyTag::Custom)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: Vec<String>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn syntax(&self, expected: &str) -> PresentationError {
        PresentationError::Syntax { position: self.pos, expected: expected.to_string() }
    }

    fn peek_is(&mut self, c: u8) -> bool {
        self.skip_ws();
        self.src.get(self.pos) == Some(&c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek_is(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, what: &str) -> Result<(), PresentationError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(what))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), PresentationError> {
        self.skip_ws();
        let start = self.pos;
        match self.src.get(self.pos) {
            Some(c) if c.is_ascii_alphabetic() || *c == b'_' => self.pos += 1,
            _ => return Err(self.syntax("generator name")),
        }
        while let Some(c) = self.src.get(self.pos) {
            if c.is_ascii_alphanumeric() || *c == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        // identifiers are ASCII by construction
        let name = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default().to_string();
        Ok((name, start))
    }

    fn integer(&mut self) -> Result<i64, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        let neg = match self.src.get(self.pos) {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let digits_start = self.pos;
        let mut value: i64 = 0;
        while let Some(c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            value = value.saturating_mul(10).saturating_add((c - b'0') as i64);
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.syntax("integer exponent"));
        }
        if value > MAX_EXPONENT {
            return Err(PresentationError::InvalidParams(format!(
                "exponent at byte {start} exceeds {MAX_EXPONENT}"
            )));
        }
        Ok(if neg { -value } else { value })
    }

    fn word(&mut self) -> Result<Word, PresentationError> {
        let mut w = self.factor()?;
        while self.eat(b'*') {
            w = w.concat(&self.factor()?);
        }
        Ok(w)
    }

    fn factor(&mut self) -> Result<Word, PresentationError> {
        let atom = self.atom()?;
        if self.eat(b'^') {
            let k = self.integer()?;
            let reduced = free_reduce(&atom);
            // a single letter keeps the power symbolic; longer words are expanded
            if let [l] = reduced.letters() {
                let e = l.exp.saturating_mul(k);
                if e.abs() > MAX_EXPONENT {
                    return Err(PresentationError::InvalidParams(format!("exponent exceeds {MAX_EXPONENT}")));
                }
                return Ok(Word::from_pairs([(l.gen, e)]));
            }
            if (reduced.len() as i64).saturating_mul(k.abs()) > MAX_EXPONENT {
                return Err(PresentationError::InvalidParams("word power too long".into()));
            }
            return Ok(reduced.pow(k));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Word, PresentationError> {
        if self.eat(b'[') {
            let x = self.word()?;
            self.expect(b',', "`,` inside commutator")?;
            let y = self.word()?;
            self.expect(b']', "`]`")?;
            return Ok(Word::commutator(&x, &y));
        }
        if self.eat(b'(') {
            let w = self.word()?;
            self.expect(b')', "`)`")?;
            return Ok(w);
        }
        self.skip_ws();
        if !matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphabetic() || *c == b'_') {
            return Err(self.syntax("generator, `[` or `(`"));
        }
        let (name, at) = self.ident()?;
        match self.names.iter().position(|n| *n == name) {
            Some(i) => Ok(Word::generator(i)),
            None => Err(PresentationError::UnknownGenerator { name, position: at }),
        }
    }
}
