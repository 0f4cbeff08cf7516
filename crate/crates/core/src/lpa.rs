//! The Leavitt path algebra `L_K(E)` of a finite graph.
//!
//! Elements are linear combinations of monomials `p·q*` with `r(p) = r(q)`.
//! A monomial is *admissible* unless `p` and `q` both end in the same edge
//! `γ` that is the special edge of its source; admissible monomials form a
//! linear basis, and [`LeavittPathAlgebra::normal_form`] rewrites any sum of
//! monomials into that basis using
//!
//! ```text
//! (p·γ)(q·γ)* = p·q* − Σ_{e ≠ γ, s(e) = s(γ)} (p·e)(q·e)*
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, Path, VertexId};
use crate::scalar::{Field, FieldElement, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpaError {
    #[error("malformed monomial: r(p) = {p_range} but r(q) = {q_range}")]
    Malformed { p_range: String, q_range: String },
    #[error("element does not belong to this graph: {0}")]
    GraphMismatch(String),
    #[error("coefficient field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: Field, found: Field },
    #[error("graded component {0} is infinite-dimensional here; supply a length bound")]
    UnboundedEnumeration(i64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("malformed element json: {0}")]
    Json(String),
}

/// `p·q*` with `r(p) = r(q)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    p: Path,
    q: Path,
}

impl Monomial {
    pub fn new(g: &Graph, p: Path, q: Path) -> Result<Self, LpaError> {
        let (rp, rq) = (p.range(g), q.range(g));
        if rp != rq {
            return Err(LpaError::Malformed {
                p_range: g.vertex_name(rp).to_owned(),
                q_range: g.vertex_name(rq).to_owned(),
            });
        }
        Ok(Monomial { p, q })
    }

    pub fn vertex(v: VertexId) -> Self {
        Monomial {
            p: Path::empty(v),
            q: Path::empty(v),
        }
    }

    /// `p` itself, i.e. `p·r(p)*`.
    pub fn path(g: &Graph, p: Path) -> Self {
        let end = Path::empty(p.range(g));
        Monomial { p, q: end }
    }

    pub fn p(&self) -> &Path {
        &self.p
    }

    pub fn q(&self) -> &Path {
        &self.q
    }

    pub fn degree(&self) -> i64 {
        self.p.len() as i64 - self.q.len() as i64
    }

    /// `(p·q*)* = q·p*`.
    pub fn star(&self) -> Monomial {
        Monomial {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// The raw product `(p₁q₁*)(p₂q₂*)`, before any normal-form rewriting.
    pub fn product(&self, g: &Graph, other: &Monomial) -> Option<Monomial> {
        if let Some(rest) = self.q.strip_prefix_of(g, &other.p) {
            // q₁*·(q₁·rest) = rest
            return Some(Monomial {
                p: self.p.concat(&rest),
                q: other.q.clone(),
            });
        }
        if let Some(rest) = other.p.strip_prefix_of(g, &self.q) {
            // (p₂·rest)*·p₂ = rest*
            return Some(Monomial {
                p: self.p.clone(),
                q: other.q.concat(&rest),
            });
        }
        None
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, g }
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    g: &'a Graph,
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = (&self.m.p, &self.m.q);
        match (p.is_empty(), q.is_empty()) {
            (_, true) => write!(f, "{}", p.display(self.g)),
            (true, false) => write!(f, "({})*", q.display(self.g)),
            (false, false) => write!(f, "{}·({})*", p.display(self.g), q.display(self.g)),
        }
    }
}

/// For each regular vertex, the emitted edge that the normal form eliminates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialEdgeChoice(BTreeMap<VertexId, EdgeId>);

impl SpecialEdgeChoice {
    /// The emitted edge with the smallest id at every regular vertex.
    pub fn minimal(g: &Graph) -> Self {
        SpecialEdgeChoice(
            g.vertices()
                .filter_map(|v| g.out_edges(v).first().map(|&e| (v, e)))
                .collect(),
        )
    }

    pub fn get(&self, v: VertexId) -> Option<EdgeId> {
        self.0.get(&v).copied()
    }

    pub fn is_special(&self, g: &Graph, e: EdgeId) -> bool {
        self.get(g.source(e)) == Some(e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, EdgeId)> + '_ {
        self.0.iter().map(|(v, e)| (*v, *e))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn special_edges(g: &Graph) -> SpecialEdgeChoice {
    SpecialEdgeChoice::minimal(g)
}

/// An element of `L_K(E)` in normal form: admissible monomials with nonzero
/// coefficients. Equality is equality of the term maps.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LpaElement {
    terms: BTreeMap<Monomial, FieldElement>,
}

/// Homogeneity of an element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    /// The zero element lies in every component.
    Zero,
    Homogeneous(i64),
    Inhomogeneous,
}

impl Degree {
    pub fn value(self) -> Option<i64> {
        match self {
            Degree::Homogeneous(d) => Some(d),
            _ => None,
        }
    }
}

impl LpaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, FieldElement> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&FieldElement> {
        self.terms.get(m)
    }

    pub fn scale(&self, c: &FieldElement) -> LpaElement {
        if c.is_zero() {
            return LpaElement::zero();
        }
        LpaElement {
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn degree(&self) -> Degree {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        match degrees.next() {
            None => Degree::Zero,
            Some(d) if degrees.all(|e| e == d) => Degree::Homogeneous(d),
            Some(_) => Degree::Inhomogeneous,
        }
    }

    /// Splits by degree; the components sum back to `self`.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, LpaElement> {
        let mut out: BTreeMap<i64, LpaElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_default()
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    pub fn component(&self, degree: i64) -> LpaElement {
        LpaElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// `(p·q*)* = q·p*` extended linearly; admissibility is symmetric in
    /// `p` and `q` so no rewriting is needed.
    pub fn involution(&self) -> LpaElement {
        LpaElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.star(), c.clone()))
                .collect(),
        }
    }

    /// Adds `c·m` assuming `m` is admissible.
    fn add_term(&mut self, m: Monomial, c: FieldElement) {
        let sum = match self.terms.remove(&m) {
            Some(a) => a + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(m, sum);
        }
    }

    pub fn display<'a>(&'a self, g: &'a Graph) -> ElementDisplay<'a> {
        ElementDisplay { a: self, g }
    }
}

impl Add for LpaElement {
    type Output = LpaElement;

    fn add(mut self, rhs: LpaElement) -> LpaElement {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for LpaElement {
    type Output = LpaElement;

    fn neg(self) -> LpaElement {
        LpaElement {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Sub for LpaElement {
    type Output = LpaElement;

    fn sub(self, rhs: LpaElement) -> LpaElement {
        self + (-rhs)
    }
}

pub struct ElementDisplay<'a> {
    a: &'a LpaElement,
    g: &'a Graph,
}

impl fmt::Display for ElementDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.a.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .a
            .terms
            .iter()
            .map(|(m, c)| {
                if c.is_one() {
                    m.display(self.g).to_string()
                } else {
                    format!("({c})·{}", m.display(self.g))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// One entry of the element json list.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub p: Vec<String>,
    pub p_base: String,
    pub q: Vec<String>,
    pub q_base: String,
    pub coeff: String,
}

/// Statistics from one normal-form computation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RewriteStats {
    pub steps: usize,
}

/// `L_K(E)` for a fixed graph, coefficient field and special-edge choice.
#[derive(Debug, Clone)]
pub struct LeavittPathAlgebra {
    graph: Arc<Graph>,
    field: Field,
    special: SpecialEdgeChoice,
}

impl LeavittPathAlgebra {
    pub fn new(graph: impl Into<Arc<Graph>>, field: Field) -> Self {
        let graph = graph.into();
        let special = SpecialEdgeChoice::minimal(&graph);
        LeavittPathAlgebra {
            graph,
            field,
            special,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn graph_arc(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn special_edges(&self) -> &SpecialEdgeChoice {
        &self.special
    }

    pub fn is_admissible(&self, m: &Monomial) -> bool {
        match (m.p.last_edge(), m.q.last_edge()) {
            (Some(a), Some(b)) => a != b || !self.special.is_special(&self.graph, a),
            _ => true,
        }
    }

    pub fn monomial(&self, m: Monomial) -> LpaElement {
        self.term(m, self.field.one())
    }

    /// `c·m` in normal form.
    pub fn term(&self, m: Monomial, c: FieldElement) -> LpaElement {
        self.normal_form(vec![(m, c)])
            .expect("monomials are well formed by construction")
    }

    pub fn vertex(&self, v: VertexId) -> LpaElement {
        self.monomial(Monomial::vertex(v))
    }

    pub fn edge(&self, e: EdgeId) -> LpaElement {
        self.monomial(Monomial::path(&self.graph, Path::edge(&self.graph, e)))
    }

    pub fn ghost(&self, e: EdgeId) -> LpaElement {
        self.edge(e).involution()
    }

    pub fn path(&self, p: Path) -> LpaElement {
        self.monomial(Monomial::path(&self.graph, p))
    }

    /// `Σ_v v`, the identity of the algebra.
    pub fn identity(&self) -> LpaElement {
        LpaElement {
            terms: self
                .graph
                .vertices()
                .map(|v| (Monomial::vertex(v), self.field.one()))
                .collect(),
        }
    }

    pub fn scalar(&self, n: i64) -> FieldElement {
        self.field.from_i64(n)
    }

    /// Rewrites a formal sum of monomials into the admissible basis.
    pub fn normal_form(&self, raw: Vec<(Monomial, FieldElement)>) -> Result<LpaElement, LpaError> {
        self.normal_form_counted(raw).map(|(a, _)| a)
    }

    pub fn normal_form_counted(
        &self,
        raw: Vec<(Monomial, FieldElement)>,
    ) -> Result<(LpaElement, RewriteStats), LpaError> {
        let g = &*self.graph;
        for (m, c) in &raw {
            Monomial::new(g, m.p.clone(), m.q.clone())?;
            self.check_field(c)?;
        }
        let mut out = LpaElement::zero();
        let mut stats = RewriteStats::default();
        let mut stack = raw;
        stack.reverse();
        while let Some((m, c)) = stack.pop() {
            if c.is_zero() {
                continue;
            }
            if self.is_admissible(&m) {
                out.add_term(m, c);
                continue;
            }
            stats.steps += 1;
            let gamma = m.p.last_edge().expect("inadmissible monomials are nonempty");
            let p = m.p.without_last(g);
            let q = m.q.without_last(g);
            let mut replacement = Vec::new();
            for &e in g.out_edges(g.source(gamma)) {
                if e != gamma {
                    replacement.push((
                        Monomial {
                            p: p.extended(e),
                            q: q.extended(e),
                        },
                        -c.clone(),
                    ));
                }
            }
            replacement.push((Monomial { p, q }, c));
            // leftmost first: the shortened monomial is processed next
            stack.extend(replacement);
        }
        Ok((out, stats))
    }

    pub fn mul(&self, a: &LpaElement, b: &LpaElement) -> LpaElement {
        self.mul_counted(a, b).0
    }

    pub fn mul_counted(&self, a: &LpaElement, b: &LpaElement) -> (LpaElement, RewriteStats) {
        let g = &*self.graph;
        let mut raw = Vec::new();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if let Some(m) = ma.product(g, mb) {
                    raw.push((m, ca.clone() * cb.clone()));
                }
            }
        }
        self.normal_form_counted(raw)
            .expect("products of well formed monomials are well formed")
    }

    /// Like [`mul`](Self::mul) but first checks both operands belong here.
    pub fn checked_mul(&self, a: &LpaElement, b: &LpaElement) -> Result<LpaElement, LpaError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub fn mul_all<'a>(&self, factors: impl IntoIterator<Item = &'a LpaElement>) -> LpaElement {
        factors
            .into_iter()
            .fold(self.identity(), |acc, x| self.mul(&acc, x))
    }

    /// Verifies that every monomial is a valid, admissible monomial of this
    /// graph with coefficients in this field.
    pub fn check_element(&self, a: &LpaElement) -> Result<(), LpaError> {
        let g = &*self.graph;
        for (m, c) in &a.terms {
            self.check_field(c)?;
            for p in [&m.p, &m.q] {
                Path::new(g, p.source(), p.edges().to_vec())
                    .map_err(|e| LpaError::GraphMismatch(e.to_string()))?;
            }
            Monomial::new(g, m.p.clone(), m.q.clone())?;
            if !self.is_admissible(m) {
                return Err(LpaError::GraphMismatch(format!(
                    "{} is not in normal form",
                    m.display(g)
                )));
            }
        }
        Ok(())
    }

    fn check_field(&self, c: &FieldElement) -> Result<(), LpaError> {
        if c.field() != self.field {
            return Err(LpaError::FieldMismatch {
                expected: self.field,
                found: c.field(),
            });
        }
        Ok(())
    }

    /// Admissible monomials of degree `n`, sorted.
    ///
    /// With no exits every component is finite and `bound` may be `None`;
    /// otherwise `bound` caps `|p|` and `|q|` and the result is truncated.
    pub fn basis_of_degree(&self, n: i64, bound: Option<usize>) -> Result<Vec<Monomial>, LpaError> {
        let g = &*self.graph;
        let max_len = match bound {
            Some(b) => b,
            None if g.no_exit_condition() => {
                // one of p, q avoids the cycles, so it has length < |E⁰|
                g.vertex_count() + n.unsigned_abs() as usize
            }
            None => return Err(LpaError::UnboundedEnumeration(n)),
        };
        let mut by_range: BTreeMap<VertexId, Vec<Path>> = BTreeMap::new();
        for p in g.paths_up_to(max_len) {
            by_range.entry(p.range(g)).or_default().push(p);
        }
        let mut out = Vec::new();
        for paths in by_range.values() {
            for p in paths {
                for q in paths {
                    if p.len() as i64 - q.len() as i64 != n {
                        continue;
                    }
                    let m = Monomial {
                        p: p.clone(),
                        q: q.clone(),
                    };
                    if self.is_admissible(&m) {
                        out.push(m);
                    }
                }
            }
        }
        out.sort();
        Ok(out)
    }

    /// `dim_K` of the degree-`n` component.
    pub fn graded_dim(&self, n: i64, bound: Option<usize>) -> Result<usize, LpaError> {
        self.basis_of_degree(n, bound).map(|b| b.len())
    }

    pub fn term_to_json(&self, m: &Monomial, c: &FieldElement) -> TermJson {
        let g = &*self.graph;
        let names = |p: &Path| p.edges().iter().map(|&e| g.edge_name(e).to_owned()).collect();
        TermJson {
            p: names(&m.p),
            p_base: g.vertex_name(m.p.source()).to_owned(),
            q: names(&m.q),
            q_base: g.vertex_name(m.q.source()).to_owned(),
            coeff: c.to_string(),
        }
    }

    pub fn element_to_json(&self, a: &LpaElement) -> Value {
        let terms: Vec<TermJson> = a
            .terms
            .iter()
            .map(|(m, c)| self.term_to_json(m, c))
            .collect();
        serde_json::to_value(terms).expect("terms serialize")
    }

    /// Reads the element json list and brings it to normal form.
    pub fn element_from_json(&self, value: &Value) -> Result<LpaElement, LpaError> {
        let terms: Vec<TermJson> =
            serde_json::from_value(value.clone()).map_err(|e| LpaError::Json(e.to_string()))?;
        let g = &*self.graph;
        let mut raw = Vec::with_capacity(terms.len());
        for t in terms {
            let p_edges: Vec<&str> = t.p.iter().map(String::as_str).collect();
            let q_edges: Vec<&str> = t.q.iter().map(String::as_str).collect();
            let p = g.path_from_names(&t.p_base, &p_edges)?;
            let q = g.path_from_names(&t.q_base, &q_edges)?;
            let m = Monomial::new(g, p, q)?;
            raw.push((m, self.field.parse(&t.coeff)?));
        }
        self.normal_form(raw)
    }
}
