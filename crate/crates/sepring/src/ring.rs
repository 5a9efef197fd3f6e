//! The representable regular rings: finite products of matrix rings over
//! prime fields, with corner (eRe) and opposite wrappers.
//!
//! Every factor is explicitly isomorphic to a plain matrix ring M_s(F_p):
//! corners via the rank factorization e = C_e B_e (with B_e C_e = 1), and
//! opposite wrappers via transposition. All constructive operations route
//! through that isomorphism, so corner and opposite semantics come out of
//! one set of plain-matrix algorithms.

use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{rref_rank_factor, Mat};

/// One factor of the ring: a matrix ring, or a wrapped factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    Matrix { n: usize, p: u64 },
    Opposite(Box<Factor>),
    Corner { inner: Box<Factor>, e: Mat },
}

impl Factor {
    /// Side of the ambient matrices housing this factor's elements.
    pub fn ambient_size(&self) -> usize {
        match self {
            Factor::Matrix { n, .. } => *n,
            Factor::Opposite(inner) => inner.ambient_size(),
            Factor::Corner { inner, .. } => inner.ambient_size(),
        }
    }

    pub fn modulus(&self) -> u64 {
        match self {
            Factor::Matrix { p, .. } => *p,
            Factor::Opposite(inner) => inner.modulus(),
            Factor::Corner { inner, .. } => inner.modulus(),
        }
    }

    /// Multiplicative identity, as an ambient matrix (the corner idempotent
    /// for corner factors).
    pub fn one(&self) -> Mat {
        match self {
            Factor::Matrix { n, p } => Mat::identity(*n, *p),
            Factor::Opposite(inner) => inner.one(),
            Factor::Corner { e, .. } => e.clone(),
        }
    }

    /// The factor's multiplication on ambient matrices. Opposite wrappers
    /// reverse the order; corner products need no correction because the
    /// corner is closed under the ambient product.
    pub fn mul(&self, x: &Mat, y: &Mat) -> Mat {
        match self {
            Factor::Matrix { .. } => x.mul(y),
            Factor::Opposite(inner) => inner.mul(y, x),
            Factor::Corner { inner, .. } => inner.mul(x, y),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Factor::Matrix { n, p } => {
                if *n == 0 {
                    return Err(Error::Precondition("matrix size must be at least 1".into()));
                }
                if !is_prime(*p) {
                    return Err(Error::NotPrime(*p));
                }
                Ok(())
            }
            Factor::Opposite(inner) => inner.validate(),
            Factor::Corner { inner, e } => {
                inner.validate()?;
                let n = inner.ambient_size();
                if e.rows() != n || e.cols() != n || e.modulus() != inner.modulus() {
                    return Err(Error::ShapeMismatch("corner idempotent has wrong shape".into()));
                }
                inner.check_element(e)?;
                if inner.mul(e, e) != *e {
                    return Err(Error::NotIdempotent);
                }
                Ok(())
            }
        }
    }

    /// Membership check: shape, modulus, and the outermost corner constraint
    /// e·x·e = x (inner corner constraints follow because e itself satisfies
    /// them).
    pub fn check_element(&self, x: &Mat) -> Result<()> {
        let n = self.ambient_size();
        if x.rows() != n || x.cols() != n || x.modulus() != self.modulus() {
            return Err(Error::ShapeMismatch(format!(
                "element must be {n}x{n} mod {}",
                self.modulus()
            )));
        }
        if let Some(e) = self.top_corner() {
            if e.mul(x).mul(e) != *x {
                return Err(Error::Precondition("element is not fixed by the corner idempotent".into()));
            }
        }
        Ok(())
    }

    fn top_corner(&self) -> Option<&Mat> {
        match self {
            Factor::Matrix { .. } => None,
            Factor::Opposite(inner) => inner.top_corner(),
            Factor::Corner { e, .. } => Some(e),
        }
    }

    fn flipped(&self) -> bool {
        match self {
            Factor::Matrix { .. } => false,
            Factor::Opposite(inner) => !inner.flipped(),
            Factor::Corner { inner, .. } => inner.flipped(),
        }
    }

    fn spec_string(&self) -> String {
        match self {
            Factor::Matrix { n, p } => format!("M{n}(F{p})"),
            Factor::Opposite(inner) => format!("op({})", inner.spec_string()),
            Factor::Corner { inner, e } => {
                let mut entries = Vec::new();
                for r in 0..e.rows() {
                    for c in 0..e.cols() {
                        entries.push(e.get(r, c).to_string());
                    }
                }
                format!("corner({}; [{}])", inner.spec_string(), entries.join(","))
            }
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Cached canonical presentation of one factor: the explicit isomorphism
/// onto M_s(F_p).
#[derive(Debug)]
pub(crate) struct Canon {
    pub s: usize,
    pub p: u64,
    pub flipped: bool,
    /// For corner factors, e = c_e · b_e with b_e · c_e = 1_s.
    pub corner: Option<(Mat, Mat)>,
}

impl Canon {
    fn build(f: &Factor) -> Canon {
        let p = f.modulus();
        let flipped = f.flipped();
        match f.top_corner() {
            None => Canon { s: f.ambient_size(), p, flipped, corner: None },
            Some(e) => {
                let rf = rref_rank_factor(e);
                debug_assert_eq!(rf.b.mul(&rf.c), Mat::identity(rf.rank, p));
                Canon { s: rf.rank, p, flipped, corner: Some((rf.c, rf.b)) }
            }
        }
    }

    /// Forward canonical isomorphism onto M_s(F_p).
    pub fn to_plain(&self, x: &Mat) -> Mat {
        let m = match &self.corner {
            Some((c_e, b_e)) => b_e.mul(x).mul(c_e),
            None => x.clone(),
        };
        if self.flipped {
            m.transpose()
        } else {
            m
        }
    }

    /// Inverse of [`Canon::to_plain`].
    pub fn from_plain(&self, m: &Mat) -> Mat {
        let m = if self.flipped { m.transpose() } else { m.clone() };
        match &self.corner {
            Some((c_e, b_e)) => c_e.mul(&m).mul(b_e),
            None => m,
        }
    }
}

#[derive(Debug)]
struct DescriptorInner {
    components: Vec<Factor>,
    canon: Vec<Canon>,
}

/// A finite product of wrapped matrix factors. Value-comparable: two
/// descriptors are equal exactly when their factor trees are equal.
#[derive(Debug, Clone)]
pub struct RingDescriptor(Arc<DescriptorInner>);

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.components == other.0.components
    }
}

impl Eq for RingDescriptor {}

impl RingDescriptor {
    pub fn new(components: Vec<Factor>) -> Result<RingDescriptor> {
        if components.is_empty() {
            return Err(Error::Precondition("ring needs at least one factor".into()));
        }
        for f in &components {
            f.validate()?;
        }
        let canon = components.iter().map(Canon::build).collect();
        Ok(RingDescriptor(Arc::new(DescriptorInner { components, canon })))
    }

    /// Single plain matrix ring M_n(F_p).
    pub fn matrix(n: usize, p: u64) -> Result<RingDescriptor> {
        RingDescriptor::new(vec![Factor::Matrix { n, p }])
    }

    pub fn components(&self) -> &[Factor] {
        &self.0.components
    }

    pub(crate) fn canon(&self, i: usize) -> &Canon {
        &self.0.canon[i]
    }

    pub fn spec_string(&self) -> String {
        self.0
            .components
            .iter()
            .map(Factor::spec_string)
            .collect::<Vec<_>>()
            .join(" x ")
    }

    pub fn zero(&self) -> RingElement {
        let parts = self
            .0
            .components
            .iter()
            .map(|f| Mat::zeros(f.ambient_size(), f.ambient_size(), f.modulus()))
            .collect();
        RingElement { ring: self.clone(), parts }
    }

    pub fn one(&self) -> RingElement {
        let parts = self.0.components.iter().map(Factor::one).collect();
        RingElement { ring: self.clone(), parts }
    }

    /// The integer k embedded as k·1.
    pub fn scalar(&self, k: i64) -> RingElement {
        let parts = self
            .0
            .components
            .iter()
            .map(|f| {
                let p = f.modulus();
                f.one().scale(k.rem_euclid(p as i64) as u64)
            })
            .collect();
        RingElement { ring: self.clone(), parts }
    }

    pub fn element(&self, parts: Vec<Mat>) -> Result<RingElement> {
        if parts.len() != self.0.components.len() {
            return Err(Error::ShapeMismatch(format!(
                "ring has {} components, got {} parts",
                self.0.components.len(),
                parts.len()
            )));
        }
        for (f, x) in self.0.components.iter().zip(&parts) {
            f.check_element(x)?;
        }
        Ok(RingElement { ring: self.clone(), parts })
    }

    /// Number of ring elements (product over factors of p^(s²)),
    /// saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        let mut total: u128 = 1;
        for c in &self.0.canon {
            let cells = (c.s * c.s) as u32;
            let factor = (c.p as u128).checked_pow(cells).unwrap_or(u128::MAX);
            total = total.saturating_mul(factor);
        }
        total
    }

    /// The element with the given canonical index. Component 0 varies
    /// fastest; within a component, canonical-form entries vary row-major
    /// with entry (0,0) fastest.
    pub fn element_by_index(&self, mut idx: u128) -> RingElement {
        let parts = self
            .0
            .canon
            .iter()
            .map(|c| {
                let mut m = Mat::zeros(c.s, c.s, c.p);
                for r in 0..c.s {
                    for col in 0..c.s {
                        m.set(r, col, (idx % c.p as u128) as u64);
                        idx /= c.p as u128;
                    }
                }
                c.from_plain(&m)
            })
            .collect();
        RingElement { ring: self.clone(), parts }
    }

    /// Iterate the whole ring in canonical index order.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        let n = self.size();
        (0..n).map(move |i| self.element_by_index(i))
    }

    /// Draw one element from the sampler's stream: canonical-form entries
    /// row-major, components in order.
    pub fn sample(&self, rng: &mut ElementSampler) -> RingElement {
        let parts = self
            .0
            .canon
            .iter()
            .map(|c| {
                let mut m = Mat::zeros(c.s, c.s, c.p);
                for r in 0..c.s {
                    for col in 0..c.s {
                        m.set(r, col, rng.below(c.p));
                    }
                }
                c.from_plain(&m)
            })
            .collect();
        RingElement { ring: self.clone(), parts }
    }
}

/// Deterministic element sampler (splitmix64 stream), keyed by a 64-bit
/// seed. The stream order is fixed across platforms.
#[derive(Debug, Clone)]
pub struct ElementSampler {
    state: u64,
}

impl ElementSampler {
    pub fn new(seed: u64) -> Self {
        ElementSampler { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, m: u64) -> u64 {
        self.next_u64() % m
    }
}

/// An element of a [`RingDescriptor`]: one ambient matrix per component
/// (corner parts stored as ambient matrices fixed by the idempotent).
#[derive(Debug, Clone)]
pub struct RingElement {
    ring: RingDescriptor,
    parts: Vec<Mat>,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.parts == other.parts
    }
}

impl Eq for RingElement {}

impl std::hash::Hash for RingElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.parts.hash(state);
    }
}

impl RingElement {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn parts(&self) -> &[Mat] {
        &self.parts
    }

    pub fn part(&self, i: usize) -> &Mat {
        &self.parts[i]
    }

    fn assert_same_ring(&self, other: &RingElement) {
        assert!(self.ring == other.ring, "elements from different rings");
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.add(b)).collect();
        RingElement { ring: self.ring.clone(), parts }
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let parts = self.parts.iter().zip(&other.parts).map(|(a, b)| a.sub(b)).collect();
        RingElement { ring: self.ring.clone(), parts }
    }

    pub fn neg(&self) -> RingElement {
        let parts = self.parts.iter().map(Mat::neg).collect();
        RingElement { ring: self.ring.clone(), parts }
    }

    pub fn mul(&self, other: &RingElement) -> RingElement {
        self.assert_same_ring(other);
        let parts = self
            .ring
            .components()
            .iter()
            .zip(self.parts.iter().zip(&other.parts))
            .map(|(f, (a, b))| f.mul(a, b))
            .collect();
        RingElement { ring: self.ring.clone(), parts }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Mat::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Canonical-form image of component `i` (an s×s matrix over F_p).
    pub(crate) fn plain(&self, i: usize) -> Mat {
        self.ring.canon(i).to_plain(&self.parts[i])
    }

    pub(crate) fn plain_parts(&self) -> Vec<Mat> {
        (0..self.parts.len()).map(|i| self.plain(i)).collect()
    }

    pub(crate) fn from_plain_parts(ring: &RingDescriptor, plain: Vec<Mat>) -> RingElement {
        let parts = plain
            .iter()
            .enumerate()
            .map(|(i, m)| ring.canon(i).from_plain(m))
            .collect();
        RingElement { ring: ring.clone(), parts }
    }

    pub fn is_unit(&self) -> bool {
        (0..self.parts.len()).all(|i| self.plain(i).is_invertible())
    }

    /// Two-sided inverse; errors when the element is not a unit.
    pub fn inverse(&self) -> Result<RingElement> {
        let mut plain = Vec::with_capacity(self.parts.len());
        for i in 0..self.parts.len() {
            plain.push(self.plain(i).inverse()?);
        }
        Ok(RingElement::from_plain_parts(&self.ring, plain))
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", element_to_json(self))
    }
}

/// Arithmetic dispatch used by the element-level external interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
    Sub,
}

/// Componentwise arithmetic with the ring-mismatch check surfaced as an
/// error (`y` is ignored for `Neg`).
pub fn elem_arith(op: ArithOp, x: &RingElement, y: &RingElement) -> Result<RingElement> {
    if x.ring() != y.ring() {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        ArithOp::Add => x.add(y),
        ArithOp::Mul => x.mul(y),
        ArithOp::Neg => x.neg(),
        ArithOp::Sub => x.sub(y),
    })
}

/// Rank vector over the matrix components; corner components are measured
/// inside rank(e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectiveClass {
    pub ranks: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassSide {
    Image,
    Kernel,
    Cokernel,
}

/// Rank vector of the image, kernel, or cokernel of left multiplication
/// by `x`. Kernel and cokernel ranks agree componentwise (matrix rings over
/// fields), which is exactly why every element here is unit-regular.
pub fn projective_class(x: &RingElement, side: ClassSide) -> ProjectiveClass {
    let ranks = (0..x.parts().len())
        .map(|i| {
            let c = x.ring().canon(i);
            let r = x.plain(i).rank();
            match side {
                ClassSide::Image => r,
                ClassSide::Kernel | ClassSide::Cokernel => c.s - r,
            }
        })
        .collect();
    ProjectiveClass { ranks }
}

/// Full rank vector of the ring (rank of the identity per component).
pub fn full_class(ring: &RingDescriptor) -> ProjectiveClass {
    let ranks = (0..ring.components().len()).map(|i| ring.canon(i).s).collect();
    ProjectiveClass { ranks }
}

/// Maps `x` in a product of corners to `x + (1 - e)` in the product of the
/// ambient factors; `x` is unit-regular in the corner exactly when the image
/// is unit-regular in the ambient ring.
pub fn corner_lift(x: &RingElement) -> Result<RingElement> {
    let mut inner_factors = Vec::new();
    for f in x.ring().components() {
        match f {
            Factor::Corner { inner, .. } => inner_factors.push((**inner).clone()),
            _ => {
                return Err(Error::Precondition(
                    "corner_lift: component is not a corner".into(),
                ))
            }
        }
    }
    let ambient = RingDescriptor::new(inner_factors)?;
    let parts = x
        .ring()
        .components()
        .iter()
        .zip(x.parts())
        .map(|(f, part)| {
            let Factor::Corner { inner, e } = f else { unreachable!() };
            part.add(&inner.one().sub(e))
        })
        .collect();
    ambient.element(parts)
}

/// Serializes an element as one JSON array-of-arrays per component.
pub fn element_to_json(x: &RingElement) -> Value {
    let comps: Vec<Value> = x
        .parts()
        .iter()
        .map(|m| {
            let rows: Vec<Value> = (0..m.rows())
                .map(|r| {
                    Value::Array((0..m.cols()).map(|c| Value::from(m.get(r, c))).collect())
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    Value::Array(comps)
}

/// Reads an element from JSON, reducing integers mod p on ingest.
pub fn element_from_json(ring: &RingDescriptor, v: &Value) -> Result<RingElement> {
    let comps = v
        .as_array()
        .ok_or_else(|| Error::Parse { pos: 0, msg: "element must be a JSON array".into() })?;
    if comps.len() != ring.components().len() {
        return Err(Error::ShapeMismatch(format!(
            "expected {} components, got {}",
            ring.components().len(),
            comps.len()
        )));
    }
    let mut parts = Vec::with_capacity(comps.len());
    for (f, comp) in ring.components().iter().zip(comps) {
        let n = f.ambient_size();
        let p = f.modulus();
        let rows = comp
            .as_array()
            .ok_or_else(|| Error::Parse { pos: 0, msg: "component must be an array of rows".into() })?;
        if rows.len() != n {
            return Err(Error::ShapeMismatch(format!("component must have {n} rows")));
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Parse { pos: 0, msg: "row must be an array".into() })?;
            if row.len() != n {
                return Err(Error::ShapeMismatch(format!("row must have {n} entries")));
            }
            for cell in row {
                let k = cell
                    .as_i64()
                    .ok_or_else(|| Error::Parse { pos: 0, msg: "entry must be an integer".into() })?;
                data.push(k);
            }
        }
        parts.push(Mat::new(n, n, p, data));
    }
    ring.element(parts)
}

/// Recursive-descent parser for the ring-spec grammar:
/// `spec := factor (" x " factor)*`,
/// `factor := "M" int "(F" int ")" | "op(" factor ")" | "corner(" factor ";" matrix-literal ")"`.
pub fn parse_ring_spec(text: &str) -> Result<RingDescriptor> {
    let mut p = Parser { text: text.as_bytes(), pos: 0 };
    let mut factors = vec![p.factor()?];
    loop {
        p.skip_ws();
        if p.eof() {
            break;
        }
        p.expect(b"x")?;
        factors.push(p.factor()?);
    }
    RingDescriptor::new(factors)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn eof(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, token: &[u8]) -> Result<()> {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            self.err(&format!("expected `{}`", String::from_utf8_lossy(token)))
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start || (self.pos == start + 1 && self.text[start] == b'-') {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer out of range".into() })
    }

    fn factor(&mut self) -> Result<Factor> {
        self.skip_ws();
        match self.peek() {
            Some(b'M') => {
                self.pos += 1;
                let n = self.integer()?;
                if n < 1 {
                    return self.err("matrix size must be at least 1");
                }
                self.expect(b"(")?;
                self.expect(b"F")?;
                let p = self.integer()?;
                if p < 2 {
                    return Err(Error::NotPrime(p.max(0) as u64));
                }
                self.expect(b")")?;
                Ok(Factor::Matrix { n: n as usize, p: p as u64 })
            }
            Some(b'o') => {
                self.expect(b"op(")?;
                let inner = self.factor()?;
                self.expect(b")")?;
                Ok(Factor::Opposite(Box::new(inner)))
            }
            Some(b'c') => {
                self.expect(b"corner(")?;
                let inner = self.factor()?;
                self.expect(b";")?;
                self.expect(b"[")?;
                let mut entries = vec![self.integer()?];
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(b',') => {
                            self.pos += 1;
                            entries.push(self.integer()?);
                        }
                        Some(b']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return self.err("expected `,` or `]`"),
                    }
                }
                self.expect(b")")?;
                let n = inner.ambient_size();
                if entries.len() != n * n {
                    return self.err(&format!("matrix literal must have {} entries", n * n));
                }
                let e = Mat::new(n, n, inner.modulus(), entries);
                Ok(Factor::Corner { inner: Box::new(inner), e })
            }
            _ => self.err("expected `M`, `op(`, or `corner(`"),
        }
    }
}
