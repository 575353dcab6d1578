//! Finite sets `{0, …, n-1}` and functions given by explicit tables.
//!
//! Every universal construction fixes a canonical element order: products are
//! row-major (`⟨x, y⟩ ↦ x·|Y| + y`), coproducts put the left block first,
//! exponentials encode a function `A → B` as the base-`|B|` number whose digit
//! `a` is its value at `a`, and subsets are sorted member lists. Sections of
//! epimorphisms pick the least preimage.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinsetError {
    #[error("cannot compose: codomain {cod} does not match domain {dom}")]
    ComposeMismatch { cod: usize, dom: usize },
    #[error("expected an arrow with {what} {expected}, found {found}")]
    ObjectMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("table has length {len} but the domain has {dom} elements")]
    TableLength { len: usize, dom: usize },
    #[error("element {element} is outside a carrier of size {size}")]
    OutOfRange { element: usize, size: usize },
    #[error("arrow is not surjective: {0} has no preimage")]
    NotEpi(usize),
    #[error("arrow is not injective")]
    NotMono,
    #[error("monomorphisms do not form a coproduct: element {0} is covered {1} times")]
    NotCoproduct(usize, usize),
    #[error("carrier is empty, so it has no basepoint")]
    Unpointed,
    #[error("carrier size overflows")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, FinsetError>;

/// The finite set `{0, …, n-1}`. Size 0 is initial, size 1 terminal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FinObj(pub usize);

impl FinObj {
    pub const INITIAL: FinObj = FinObj(0);
    pub const TERMINAL: FinObj = FinObj(1);

    pub fn size(self) -> usize {
        self.0
    }

    pub fn elements(self) -> std::ops::Range<usize> {
        0..self.0
    }

    pub fn is_pointed(self) -> bool {
        self.0 >= 1
    }
}

impl fmt::Display for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A total function between finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FinMor {
    dom: FinObj,
    cod: FinObj,
    table: Vec<usize>,
}

impl FinMor {
    pub fn new(dom: FinObj, cod: FinObj, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.0 {
            return Err(FinsetError::TableLength {
                len: table.len(),
                dom: dom.0,
            });
        }
        if let Some(&v) = table.iter().find(|&&v| v >= cod.0) {
            return Err(FinsetError::OutOfRange {
                element: v,
                size: cod.0,
            });
        }
        Ok(FinMor { dom, cod, table })
    }

    /// Caller guarantees the table is valid.
    pub(crate) fn from_table_unchecked(dom: FinObj, cod: FinObj, table: Vec<usize>) -> Self {
        debug_assert!(table.len() == dom.0 && table.iter().all(|&v| v < cod.0));
        FinMor { dom, cod, table }
    }

    pub fn identity(x: FinObj) -> Self {
        FinMor::from_table_unchecked(x, x, x.elements().collect())
    }

    /// The unique arrow `0 → X`.
    pub fn from_initial(x: FinObj) -> Self {
        FinMor::from_table_unchecked(FinObj::INITIAL, x, Vec::new())
    }

    /// The unique arrow `X → 1`.
    pub fn to_terminal(x: FinObj) -> Self {
        FinMor::from_table_unchecked(x, FinObj::TERMINAL, vec![0; x.0])
    }

    /// The constant arrow `X → Y` with value `y`.
    pub fn constant(x: FinObj, y_obj: FinObj, y: usize) -> Result<Self> {
        FinMor::new(x, y_obj, vec![y; x.0])
    }

    pub fn dom(&self) -> FinObj {
        self.dom
    }

    pub fn cod(&self) -> FinObj {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, i: usize) -> usize {
        self.table[i]
    }

    pub fn is_epi(&self) -> bool {
        self.first_missed().is_none()
    }

    fn first_missed(&self) -> Option<usize> {
        let mut hit = vec![false; self.cod.0];
        self.table.iter().for_each(|&v| hit[v] = true);
        hit.iter().position(|h| !h)
    }

    pub fn is_mono(&self) -> bool {
        let mut hit = vec![false; self.cod.0];
        self.table.iter().all(|&v| !std::mem::replace(&mut hit[v], true))
    }

    pub fn is_iso(&self) -> bool {
        self.dom == self.cod && self.is_mono()
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<FinMor> {
        if !self.is_mono() {
            return Err(FinsetError::NotMono);
        }
        if let Some(y) = self.first_missed() {
            return Err(FinsetError::NotEpi(y));
        }
        let mut inv = vec![0; self.cod.0];
        for (i, &v) in self.table.iter().enumerate() {
            inv[v] = i;
        }
        Ok(FinMor::from_table_unchecked(self.cod, self.dom, inv))
    }
}

impl fmt::Display for FinMor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [", self.dom, self.cod)?;
        for (i, v) in self.table.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// `g ∘ f`.
pub fn compose(g: &FinMor, f: &FinMor) -> Result<FinMor> {
    if f.cod != g.dom {
        return Err(FinsetError::ComposeMismatch {
            cod: f.cod.0,
            dom: g.dom.0,
        });
    }
    Ok(FinMor::from_table_unchecked(
        f.dom,
        g.cod,
        f.table.iter().map(|&i| g.table[i]).collect(),
    ))
}

fn expect_obj(what: &'static str, expected: FinObj, found: FinObj) -> Result<()> {
    if expected != found {
        return Err(FinsetError::ObjectMismatch {
            what,
            expected: expected.0,
            found: found.0,
        });
    }
    Ok(())
}

/// A subset of a finite carrier: the canonical representative of a subobject.
/// Its inclusion is the chosen monomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Subset {
    carrier: FinObj,
    members: Vec<usize>,
}

impl Subset {
    /// Sorts and deduplicates `members`.
    pub fn new(carrier: FinObj, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut members: Vec<usize> = members.into_iter().collect();
        if let Some(&v) = members.iter().find(|&&v| v >= carrier.0) {
            return Err(FinsetError::OutOfRange {
                element: v,
                size: carrier.0,
            });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Subset { carrier, members })
    }

    pub(crate) fn from_sorted_unchecked(carrier: FinObj, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&m| m < carrier.0));
        Subset { carrier, members }
    }

    pub(crate) fn from_predicate(carrier: FinObj, pred: impl Fn(usize) -> bool) -> Self {
        Subset {
            carrier,
            members: carrier.elements().filter(|&i| pred(i)).collect(),
        }
    }

    /// The subset whose members are the set bits of `mask`.
    pub fn from_mask(carrier: FinObj, mask: u64) -> Self {
        Subset::from_predicate(carrier, |i| mask >> i & 1 == 1)
    }

    pub fn empty(carrier: FinObj) -> Self {
        Subset {
            carrier,
            members: Vec::new(),
        }
    }

    pub fn full(carrier: FinObj) -> Self {
        Subset {
            carrier,
            members: carrier.elements().collect(),
        }
    }

    /// The image of an arbitrary arrow, i.e. the subobject a mono represents.
    pub fn image_of(f: &FinMor) -> Self {
        Subset::new(f.cod, f.table.iter().copied()).expect("table entries are in range")
    }

    pub fn carrier(&self) -> FinObj {
        self.carrier
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.carrier.0
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// The inclusion `{s} → carrier` enumerating members in order.
    pub fn inclusion(&self) -> FinMor {
        FinMor::from_table_unchecked(FinObj(self.members.len()), self.carrier, self.members.clone())
    }

    fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.carrier.0];
        self.members.iter().for_each(|&i| m[i] = true);
        m
    }

    fn check_carrier(&self, other: &Subset) -> Result<()> {
        expect_obj("carrier", self.carrier, other.carrier)
    }

    pub fn meet(&self, other: &Subset) -> Result<Subset> {
        self.check_carrier(other)?;
        let m = other.mask();
        Ok(Subset::from_sorted_unchecked(
            self.carrier,
            self.members.iter().copied().filter(|&i| m[i]).collect(),
        ))
    }

    pub fn join(&self, other: &Subset) -> Result<Subset> {
        self.check_carrier(other)?;
        let (a, b) = (self.mask(), other.mask());
        Ok(Subset::from_predicate(self.carrier, |i| a[i] || b[i]))
    }

    pub fn complement(&self) -> Subset {
        let m = self.mask();
        Subset::from_predicate(self.carrier, |i| !m[i])
    }

    /// Inclusion order.
    pub fn leq(&self, other: &Subset) -> Result<bool> {
        self.check_carrier(other)?;
        Ok(self.members.iter().all(|&i| other.contains(i)))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}} ⊆ {}", self.carrier)
    }
}

/// Set complement; `(incl s, incl ¬s)` is a coproduct diagram.
pub fn complement(s: &Subset) -> Subset {
    s.complement()
}

/// The binary product `X × Y` with its projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product {
    pub left: FinObj,
    pub right: FinObj,
    pub obj: FinObj,
    /// First projection `π : X × Y → X`.
    pub fst: FinMor,
    /// Second projection `π′ : X × Y → Y`.
    pub snd: FinMor,
}

impl Product {
    pub fn encode(&self, x: usize, y: usize) -> usize {
        x * self.right.0 + y
    }

    pub fn decode(&self, i: usize) -> (usize, usize) {
        (i / self.right.0, i % self.right.0)
    }

    /// The mediating arrow `⟨f, g⟩`.
    pub fn pair(&self, f: &FinMor, g: &FinMor) -> Result<FinMor> {
        expect_obj("domain", f.dom, g.dom)?;
        expect_obj("codomain", self.left, f.cod)?;
        expect_obj("codomain", self.right, g.cod)?;
        Ok(FinMor::from_table_unchecked(
            f.dom,
            self.obj,
            f.table.iter().zip(&g.table).map(|(&x, &y)| self.encode(x, y)).collect(),
        ))
    }
}

pub fn product(x: FinObj, y: FinObj) -> Result<Product> {
    let n = x.0.checked_mul(y.0).ok_or(FinsetError::Overflow)?;
    let obj = FinObj(n);
    let fst = FinMor::from_table_unchecked(obj, x, (0..n).map(|i| i / y.0).collect());
    let snd = FinMor::from_table_unchecked(obj, y, (0..n).map(|i| i % y.0).collect());
    Ok(Product {
        left: x,
        right: y,
        obj,
        fst,
        snd,
    })
}

/// Size of an n-ary row-major product; the empty product is 1.
pub fn product_size(factors: &[FinObj]) -> Result<FinObj> {
    factors
        .iter()
        .try_fold(1usize, |acc, f| acc.checked_mul(f.0))
        .map(FinObj)
        .ok_or(FinsetError::Overflow)
}

/// `⟨f1, …, fn⟩ : X → Y1 × … × Yn` under the row-major encoding, first factor
/// most significant. With no components this is `X → 1`.
pub fn tuple(dom: FinObj, fs: &[FinMor]) -> Result<FinMor> {
    for f in fs {
        expect_obj("domain", dom, f.dom)?;
    }
    let cod = product_size(&fs.iter().map(FinMor::cod).collect::<Vec<_>>())?;
    let table = dom
        .elements()
        .map(|i| fs.iter().fold(0, |acc, f| acc * f.cod.0 + f.table[i]))
        .collect();
    Ok(FinMor::from_table_unchecked(dom, cod, table))
}

/// A pullback square over a common codomain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pullback {
    pub obj: FinObj,
    /// Projection onto the domain of `f`.
    pub p1: FinMor,
    /// Projection onto the domain of `g`.
    pub p2: FinMor,
}

/// Pullback of `g` along `f`: pairs `(a, b)` with `f(a) = g(b)` in lexicographic order.
pub fn pullback(f: &FinMor, g: &FinMor) -> Result<Pullback> {
    expect_obj("codomain", f.cod, g.cod)?;
    let pairs: Vec<(usize, usize)> = f
        .dom
        .elements()
        .flat_map(|a| {
            g.dom
                .elements()
                .filter(move |&b| f.table[a] == g.table[b])
                .map(move |b| (a, b))
        })
        .collect();
    let obj = FinObj(pairs.len());
    Ok(Pullback {
        obj,
        p1: FinMor::from_table_unchecked(obj, f.dom, pairs.iter().map(|p| p.0).collect()),
        p2: FinMor::from_table_unchecked(obj, g.dom, pairs.iter().map(|p| p.1).collect()),
    })
}

impl Pullback {
    /// The unique `k : W → P` with `p1 k = h1` and `p2 k = h2`, if the cone commutes.
    pub fn mediate(&self, h1: &FinMor, h2: &FinMor) -> Option<FinMor> {
        if h1.dom != h2.dom || h1.cod != self.p1.cod || h2.cod != self.p2.cod {
            return None;
        }
        let table = h1
            .dom
            .elements()
            .map(|w| {
                self.obj
                    .elements()
                    .find(|&i| self.p1.table[i] == h1.table[w] && self.p2.table[i] == h2.table[w])
            })
            .collect::<Option<Vec<_>>>()?;
        Some(FinMor::from_table_unchecked(h1.dom, self.obj, table))
    }
}

/// An epi–mono factorization `f = m ∘ e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    /// The image, as a subset of `cod f`.
    pub image: Subset,
    /// Corestriction onto the image (a surjection, hence a regular epi).
    pub e: FinMor,
    /// Inclusion of the image.
    pub m: FinMor,
}

pub fn image_factorize(f: &FinMor) -> Factorization {
    let image = Subset::image_of(f);
    let mut index = vec![usize::MAX; f.cod.0];
    for (k, &y) in image.members.iter().enumerate() {
        index[y] = k;
    }
    let e = FinMor::from_table_unchecked(f.dom, FinObj(image.len()), f.table.iter().map(|&y| index[y]).collect());
    let m = image.inclusion();
    Factorization { image, e, m }
}

/// The mediator `[f, g] : Y → Z` out of a coproduct presented by two monos
/// `m : X → Y` and `nm : ¬X → Y` that are disjoint and jointly cover `Y`.
pub fn copair(f: &FinMor, g: &FinMor, m: &FinMor, nm: &FinMor) -> Result<FinMor> {
    expect_obj("codomain", m.cod, nm.cod)?;
    expect_obj("domain", m.dom, f.dom)?;
    expect_obj("domain", nm.dom, g.dom)?;
    expect_obj("codomain", f.cod, g.cod)?;
    let y = m.cod;
    let mut out: Vec<Option<usize>> = vec![None; y.0];
    let mut hits = vec![0usize; y.0];
    for (src, inj) in [(f, m), (g, nm)] {
        for (i, &target) in inj.table.iter().enumerate() {
            hits[target] += 1;
            out[target] = Some(src.table[i]);
        }
    }
    if let Some((k, &h)) = hits.iter().enumerate().find(|(_, &h)| h != 1) {
        return Err(FinsetError::NotCoproduct(k, h));
    }
    Ok(FinMor::from_table_unchecked(
        y,
        f.cod,
        out.into_iter().map(|v| v.expect("covered")).collect(),
    ))
}

/// The least-preimage section `s` of a surjection `e`, with `e ∘ s = id`.
pub fn section_of_epi(e: &FinMor) -> Result<FinMor> {
    let mut s = vec![None; e.cod.0];
    for (i, &y) in e.table.iter().enumerate() {
        s[y].get_or_insert(i);
    }
    let table = s
        .iter()
        .enumerate()
        .map(|(y, v)| v.ok_or(FinsetError::NotEpi(y)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FinMor::from_table_unchecked(e.cod, e.dom, table))
}

/// The section `⟨id_X, b ∘ !_X⟩ : X → X × Y` of the first projection, given a
/// basepoint `b` of `Y`.
pub fn section_of_projection(prod: &Product, basepoint: usize) -> Result<FinMor> {
    if !prod.right.is_pointed() {
        return Err(FinsetError::Unpointed);
    }
    if basepoint >= prod.right.0 {
        return Err(FinsetError::OutOfRange {
            element: basepoint,
            size: prod.right.0,
        });
    }
    let point = FinMor::constant(prod.left, prod.right, basepoint)?;
    prod.pair(&FinMor::identity(prod.left), &point)
}

/// The binary coproduct `X + Y`, left block first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coproduct {
    pub left: FinObj,
    pub right: FinObj,
    pub obj: FinObj,
    pub inl: FinMor,
    pub inr: FinMor,
}

impl Coproduct {
    /// The unique `[f, g] : X + Y → Z`.
    pub fn mediator(&self, f: &FinMor, g: &FinMor) -> Result<FinMor> {
        copair(f, g, &self.inl, &self.inr)
    }
}

pub fn coproduct(x: FinObj, y: FinObj) -> Result<Coproduct> {
    let n = x.0.checked_add(y.0).ok_or(FinsetError::Overflow)?;
    let obj = FinObj(n);
    Ok(Coproduct {
        left: x,
        right: y,
        obj,
        inl: FinMor::from_table_unchecked(x, obj, x.elements().collect()),
        inr: FinMor::from_table_unchecked(y, obj, y.elements().map(|j| x.0 + j).collect()),
    })
}

/// The exponential `B^A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exponential {
    pub arg: FinObj,
    pub result: FinObj,
    pub obj: FinObj,
    /// `eval : B^A × A → B`.
    pub eval: FinMor,
}

impl Exponential {
    /// Code of the function with the given table.
    pub fn encode(&self, table: &[usize]) -> usize {
        table.iter().rev().fold(0, |acc, &v| acc * self.result.0 + v)
    }

    /// Table of the function with the given code.
    pub fn decode(&self, mut code: usize) -> Vec<usize> {
        (0..self.arg.0)
            .map(|_| {
                let d = code % self.result.0;
                code /= self.result.0;
                d
            })
            .collect()
    }

    /// Curries `f : C × A → B` to the unique `C → B^A`.
    pub fn transpose(&self, f: &FinMor, c: FinObj) -> Result<FinMor> {
        let dom = product(c, self.arg)?;
        expect_obj("domain", dom.obj, f.dom)?;
        expect_obj("codomain", self.result, f.cod)?;
        let table = c
            .elements()
            .map(|ci| {
                let row: Vec<usize> = self.arg.elements().map(|a| f.table[dom.encode(ci, a)]).collect();
                self.encode(&row)
            })
            .collect();
        Ok(FinMor::from_table_unchecked(c, self.obj, table))
    }
}

pub fn exponential(a: FinObj, b: FinObj) -> Result<Exponential> {
    let exp = u32::try_from(a.0).map_err(|_| FinsetError::Overflow)?;
    let n = b.0.checked_pow(exp).ok_or(FinsetError::Overflow)?;
    let obj = FinObj(n);
    let dom = product(obj, a)?;
    let mut e = Exponential {
        arg: a,
        result: b,
        obj,
        eval: FinMor::identity(FinObj::INITIAL),
    };
    let table = dom
        .obj
        .elements()
        .map(|i| {
            let (code, x) = dom.decode(i);
            code / b.0.pow(x as u32) % b.0
        })
        .collect();
    e.eval = FinMor::from_table_unchecked(dom.obj, b, table);
    Ok(e)
}

/// `f × g : A × C → B × D`.
pub fn product_map(f: &FinMor, g: &FinMor) -> Result<FinMor> {
    let dom = product(f.dom, g.dom)?;
    let cod = product(f.cod, g.cod)?;
    let left = compose(f, &dom.fst)?;
    let right = compose(g, &dom.snd)?;
    cod.pair(&left, &right)
}

/// Every arrow `dom → cod`, ordered by table code with element 0 as the least
/// significant digit.
pub fn all_morphisms(dom: FinObj, cod: FinObj) -> impl Iterator<Item = FinMor> {
    let count = u32::try_from(dom.0)
        .ok()
        .and_then(|e| cod.0.checked_pow(e))
        .expect("hom-set too large to enumerate");
    (0..count).map(move |mut code| {
        let table = dom
            .elements()
            .map(|_| {
                let d = code % cod.0;
                code /= cod.0;
                d
            })
            .collect();
        FinMor::from_table_unchecked(dom, cod, table)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mor(dom: usize, cod: usize, t: &[usize]) -> FinMor {
        FinMor::new(FinObj(dom), FinObj(cod), t.to_vec()).unwrap()
    }

    #[test]
    fn compose_tables() {
        let f = mor(2, 3, &[0, 2]);
        let g = mor(3, 2, &[1, 0, 0]);
        assert_eq!(compose(&g, &f).unwrap().table(), &[1, 0]);
        assert_eq!(compose(&FinMor::identity(FinObj(3)), &f).unwrap(), f);
        assert_eq!(compose(&f, &f), Err(FinsetError::ComposeMismatch { cod: 3, dom: 2 }));
    }

    #[test]
    fn invalid_tables_rejected() {
        assert!(FinMor::new(FinObj(2), FinObj(2), vec![0]).is_err());
        assert!(FinMor::new(FinObj(1), FinObj(2), vec![2]).is_err());
    }

    #[test]
    fn product_encoding() {
        let p = product(FinObj(2), FinObj(3)).unwrap();
        assert_eq!(p.obj, FinObj(6));
        assert_eq!(p.fst.table(), &[0, 0, 0, 1, 1, 1]);
        assert_eq!(p.snd.table(), &[0, 1, 2, 0, 1, 2]);
        assert_eq!(p.pair(&p.fst, &p.snd).unwrap(), FinMor::identity(p.obj));
        let q = product(FinObj(4), FinObj::TERMINAL).unwrap();
        assert!(q.fst.is_iso());
    }

    #[test]
    fn pullback_of_inclusions_is_intersection() {
        let a = FinObj(5);
        let m = Subset::new(a, [0, 2, 3]).unwrap();
        let n = Subset::new(a, [2, 3, 4]).unwrap();
        let pb = pullback(&m.inclusion(), &n.inclusion()).unwrap();
        let meet = compose(&m.inclusion(), &pb.p1).unwrap();
        assert_eq!(Subset::image_of(&meet), m.meet(&n).unwrap());
        assert_eq!(pb.obj, FinObj(2));
    }

    #[test]
    fn pullback_special_cases() {
        let g = mor(3, 2, &[1, 0, 1]);
        let pb = pullback(&FinMor::identity(FinObj(2)), &g).unwrap();
        assert_eq!(pb.obj, FinObj(3));
        assert!(pb.p2.is_iso());
        let f = FinMor::to_terminal(FinObj(2));
        let h = FinMor::to_terminal(FinObj(3));
        assert_eq!(pullback(&f, &h).unwrap().obj, FinObj(6));
        assert!(pullback(&f, &g).is_err());
    }

    #[test]
    fn pullback_universal_property() {
        let f = mor(3, 2, &[0, 1, 1]);
        let g = mor(2, 2, &[1, 0]);
        let pb = pullback(&f, &g).unwrap();
        // commuting square
        assert_eq!(compose(&f, &pb.p1).unwrap(), compose(&g, &pb.p2).unwrap());
        // every commuting cone from 1 factors uniquely
        for a in 0..3 {
            for b in 0..2 {
                let h1 = mor(1, 3, &[a]);
                let h2 = mor(1, 2, &[b]);
                let commutes = f.apply(a) == g.apply(b);
                assert_eq!(pb.mediate(&h1, &h2).is_some(), commutes);
            }
        }
    }

    #[test]
    fn image_factorization() {
        let f = mor(2, 3, &[1, 1]);
        let fac = image_factorize(&f);
        assert_eq!(fac.image.members(), &[1]);
        assert_eq!(fac.e.table(), &[0, 0]);
        assert_eq!(fac.m.table(), &[1]);
        let mono = mor(2, 3, &[2, 0]);
        assert!(image_factorize(&mono).e.is_iso());
        let epi = mor(3, 2, &[1, 0, 1]);
        assert!(image_factorize(&epi).m.is_iso());
    }

    #[test]
    fn copair_interleaves() {
        let y = FinObj(3);
        let s = Subset::new(y, [0, 2]).unwrap();
        let ns = complement(&s);
        assert_eq!(ns.members(), &[1]);
        let f = mor(2, 4, &[3, 1]);
        let g = mor(1, 4, &[0]);
        let med = copair(&f, &g, &s.inclusion(), &ns.inclusion()).unwrap();
        assert_eq!(med.table(), &[3, 0, 1]);
        // m = id, ¬m out of 0
        let id = FinMor::identity(y);
        let f3 = mor(3, 2, &[1, 1, 0]);
        let none = FinMor::from_initial(y);
        assert_eq!(copair(&f3, &FinMor::from_initial(FinObj(2)), &id, &none).unwrap(), f3);
        // overlapping monos
        let m1 = Subset::new(y, [0, 1]).unwrap().inclusion();
        let m2 = Subset::new(y, [1, 2]).unwrap().inclusion();
        let err = copair(&mor(2, 1, &[0, 0]), &mor(2, 1, &[0, 0]), &m1, &m2).unwrap_err();
        assert_eq!(err, FinsetError::NotCoproduct(1, 2));
    }

    #[test]
    fn complements() {
        let c = FinObj(3);
        assert_eq!(complement(&Subset::new(c, [0, 2]).unwrap()).members(), &[1]);
        assert!(complement(&Subset::empty(c)).is_full());
        assert!(complement(&Subset::full(c)).is_empty());
    }

    #[test]
    fn epi_sections() {
        assert_eq!(section_of_epi(&mor(3, 2, &[0, 0, 1])).unwrap().table(), &[0, 2]);
        let iso = mor(3, 3, &[2, 0, 1]);
        assert_eq!(section_of_epi(&iso).unwrap(), iso.inverse().unwrap());
        assert_eq!(section_of_epi(&mor(2, 1, &[0, 0])).unwrap().table(), &[0]);
        assert_eq!(section_of_epi(&mor(2, 3, &[0, 2])), Err(FinsetError::NotEpi(1)));
    }

    #[test]
    fn projection_sections() {
        let p = product(FinObj(2), FinObj(2)).unwrap();
        let s = section_of_projection(&p, 0).unwrap();
        assert_eq!(s.table(), &[0, 2]);
        assert_eq!(compose(&p.fst, &s).unwrap(), FinMor::identity(FinObj(2)));
        let q = product(FinObj(3), FinObj(1)).unwrap();
        assert_eq!(section_of_projection(&q, 0).unwrap(), q.fst.inverse().unwrap());
        let e = product(FinObj(3), FinObj(0)).unwrap();
        assert_eq!(section_of_projection(&e, 0), Err(FinsetError::Unpointed));
    }

    #[test]
    fn coproducts() {
        let c = coproduct(FinObj(2), FinObj(3)).unwrap();
        assert_eq!(c.obj, FinObj(5));
        assert_eq!(c.inr.table(), &[2, 3, 4]);
        assert_eq!(c.mediator(&c.inl, &c.inr).unwrap(), FinMor::identity(c.obj));
        let z = coproduct(FinObj(4), FinObj(0)).unwrap();
        assert!(z.inl.is_iso());
    }

    #[test]
    fn exponentials() {
        let e = exponential(FinObj(2), FinObj(2)).unwrap();
        assert_eq!(e.obj, FinObj(4));
        assert_eq!(e.decode(2), vec![0, 1]);
        assert_eq!(exponential(FinObj(0), FinObj(3)).unwrap().obj, FinObj(1));
        assert_eq!(exponential(FinObj(3), FinObj(0)).unwrap().obj, FinObj(0));
        assert_eq!(exponential(FinObj(64), FinObj(3)), Err(FinsetError::Overflow));
    }

    #[test]
    fn exponential_universal_property() {
        let (c, a, b) = (FinObj(2), FinObj(2), FinObj(3));
        let e = exponential(a, b).unwrap();
        let ca = product(c, a).unwrap();
        // all f : C × A → B
        for code in 0..b.0.pow(ca.obj.0 as u32) {
            let table: Vec<usize> = (0..ca.obj.0).map(|i| code / b.0.pow(i as u32) % b.0).collect();
            let f = FinMor::new(ca.obj, b, table).unwrap();
            let t = e.transpose(&f, c).unwrap();
            let back = compose(&e.eval, &product_map(&t, &FinMor::identity(a)).unwrap()).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn hom_set_enumeration() {
        let maps: Vec<_> = all_morphisms(FinObj(2), FinObj(3)).collect();
        assert_eq!(maps.len(), 9);
        assert_eq!(maps[1].table(), &[1, 0]);
        assert_eq!(maps[3].table(), &[0, 1]);
        assert_eq!(all_morphisms(FinObj(0), FinObj(0)).count(), 1);
        assert_eq!(all_morphisms(FinObj(2), FinObj(0)).count(), 0);
    }

    #[test]
    fn tuple_is_row_major() {
        let x = FinObj(2);
        let f = mor(2, 3, &[2, 0]);
        let g = mor(2, 2, &[1, 1]);
        let p = product(FinObj(3), FinObj(2)).unwrap();
        assert_eq!(tuple(x, &[f.clone(), g.clone()]).unwrap(), p.pair(&f, &g).unwrap());
        assert_eq!(tuple(x, &[]).unwrap(), FinMor::to_terminal(x));
    }
}
