//! Finite crossed modules `(G, X, d)`: a boundary homomorphism `d: X -> G`
//! and an action of `G` on `X` by automorphisms subject to the two Peiffer
//! identities. Standard constructions, report-style validation, and brute
//! force homomorphism/automorphism enumeration.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, GroupAction, GroupError};

/// Default cap on candidate generator-image assignments in the
/// homomorphism search.
pub const DEFAULT_AUT_CANDIDATE_CAP: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum XModError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid crossed module: {0}")]
    Invalid(String),
    #[error("search size limit exceeded: {0} candidates (cap {1})")]
    SizeLimit(u64, u64),
}

/// A finite crossed module.
#[derive(Clone)]
pub struct CrossedModule {
    g: Arc<FiniteGroup>,
    x: Arc<FiniteGroup>,
    partial: Vec<usize>,
    action: GroupAction,
}

impl fmt::Debug for CrossedModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CrossedModule(|G|={}, |X|={})",
            self.g.order(),
            self.x.order()
        )
    }
}

impl PartialEq for CrossedModule {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
            && self.x == other.x
            && self.partial == other.partial
            && self.action == other.action
    }
}

impl Eq for CrossedModule {}

/// One failed identity together with a witness tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XModFailure {
    /// `d(x x') != d(x) d(x')`
    BoundaryNotHom { x: usize, y: usize },
    /// `d(x)` acting on `x'` differs from `x x' x^{-1}`
    Peiffer1 { x: usize, y: usize },
    /// `d(g.x) != g d(x) g^{-1}`
    Peiffer2 { g: usize, x: usize },
    /// an element of `Ker d` is not central in `X`
    KernelNotCentral { k: usize, x: usize },
}

impl fmt::Display for XModFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XModFailure::BoundaryNotHom { x, y } => {
                write!(f, "boundary is not a homomorphism at (x={x}, x'={y})")
            }
            XModFailure::Peiffer1 { x, y } => {
                write!(f, "Peiffer identity 1 fails at (x={x}, x'={y})")
            }
            XModFailure::Peiffer2 { g, x } => {
                write!(f, "Peiffer identity 2 fails at (g={g}, x={x})")
            }
            XModFailure::KernelNotCentral { k, x } => {
                write!(f, "kernel element {k} does not commute with {x}")
            }
        }
    }
}

/// Validation report listing every failed identity.
#[derive(Clone, Debug, Default)]
pub struct XModReport {
    pub failures: Vec<XModFailure>,
}

impl XModReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl CrossedModule {
    /// Assembles a crossed module, checking dimensions only; mathematical
    /// validity is a separate, report-style concern (see [`Self::validate`]).
    pub fn new(
        g: Arc<FiniteGroup>,
        x: Arc<FiniteGroup>,
        partial: Vec<usize>,
        action: GroupAction,
    ) -> Result<Self, XModError> {
        if partial.len() != x.order() {
            return Err(XModError::Dimension(format!(
                "boundary has {} entries for |X| = {}",
                partial.len(),
                x.order()
            )));
        }
        if partial.iter().any(|&v| v >= g.order()) {
            return Err(XModError::Dimension("boundary maps outside G".into()));
        }
        if action.acting().order() != g.order() || action.space().order() != x.order() {
            return Err(XModError::Dimension("action tables do not match G, X".into()));
        }
        Ok(CrossedModule {
            g,
            x,
            partial,
            action,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.g
    }

    pub fn space(&self) -> &Arc<FiniteGroup> {
        &self.x
    }

    #[inline]
    pub fn boundary(&self, x: usize) -> usize {
        self.partial[x]
    }

    pub fn boundary_map(&self) -> &[usize] {
        &self.partial
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    /// `g . x`
    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action.apply(g, x)
    }

    /// Checks every crossed-module identity, collecting all failures with
    /// witnesses (first in lexicographic order per identity kind).
    pub fn validate(&self) -> XModReport {
        let mut failures = Vec::new();
        let nx = self.x.order();
        let ng = self.g.order();
        'hom: for x in 0..nx {
            for y in 0..nx {
                if self.partial[self.x.mul(x, y)] != self.g.mul(self.partial[x], self.partial[y]) {
                    failures.push(XModFailure::BoundaryNotHom { x, y });
                    break 'hom;
                }
            }
        }
        'p1: for x in 0..nx {
            for y in 0..nx {
                if self.act(self.partial[x], y) != self.x.conj(x, y) {
                    failures.push(XModFailure::Peiffer1 { x, y });
                    break 'p1;
                }
            }
        }
        'p2: for g in 0..ng {
            for x in 0..nx {
                if self.partial[self.act(g, x)] != self.g.conj(g, self.partial[x]) {
                    failures.push(XModFailure::Peiffer2 { g, x });
                    break 'p2;
                }
            }
        }
        // derived consequence of Peiffer 1: Ker d central in X
        if failures.is_empty() {
            'ker: for k in 0..nx {
                if self.partial[k] != self.g.identity() {
                    continue;
                }
                for x in 0..nx {
                    if self.x.mul(k, x) != self.x.mul(x, k) {
                        failures.push(XModFailure::KernelNotCentral { k, x });
                        break 'ker;
                    }
                }
            }
        }
        XModReport { failures }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// `Ker d`, sorted. Errors if the kernel is not abelian, which signals
    /// an invalid crossed module.
    pub fn ker_boundary(&self) -> Result<Vec<usize>, XModError> {
        let e = self.g.identity();
        let ker: Vec<usize> = (0..self.x.order())
            .filter(|&x| self.partial[x] == e)
            .collect();
        for &a in &ker {
            for &b in &ker {
                if self.x.mul(a, b) != self.x.mul(b, a) {
                    return Err(XModError::Invalid(format!(
                        "Ker d is not abelian: {a} and {b} do not commute"
                    )));
                }
            }
        }
        Ok(ker)
    }
}

/// `Ker d` of a crossed module (see [`CrossedModule::ker_boundary`]).
pub fn ker_partial(m: &CrossedModule) -> Result<Vec<usize>, XModError> {
    m.ker_boundary()
}

/// The conjugation crossed module `(G, G, id)`.
pub fn conjugation_module(g: &Arc<FiniteGroup>) -> CrossedModule {
    let action = GroupAction::conjugation(g);
    CrossedModule {
        g: Arc::clone(g),
        x: Arc::clone(g),
        partial: (0..g.order()).collect(),
        action,
    }
}

/// The inclusion crossed module `(G, N, incl)` of a normal subgroup, with
/// `G` acting on `N` by conjugation.
pub fn inclusion_module(
    g: &Arc<FiniteGroup>,
    normal: &[usize],
) -> Result<CrossedModule, XModError> {
    if !g.is_normal(normal) {
        return Err(XModError::Group(GroupError::NotNormal));
    }
    let (sub, embed) = g.subgroup_group(normal)?;
    let mut pos = vec![usize::MAX; g.order()];
    for (i, &e) in embed.iter().enumerate() {
        pos[e] = i;
    }
    let nx = sub.order();
    let mut table = Vec::with_capacity(g.order() * nx);
    for gg in 0..g.order() {
        for x in 0..nx {
            table.push(pos[g.conj(gg, embed[x])]);
        }
    }
    let x = Arc::new(sub);
    let action = GroupAction::new(Arc::clone(g), Arc::clone(&x), chunk(table, nx))?;
    CrossedModule::new(Arc::clone(g), x, embed, action)
}

/// The crossed module `({e}, A, trivial)` of an abelian group.
pub fn trivial_base_module(a: &Arc<FiniteGroup>) -> Result<CrossedModule, XModError> {
    if !a.is_abelian() {
        return Err(XModError::Group(GroupError::NotAbelian));
    }
    let g = Arc::new(FiniteGroup::trivial());
    let action = GroupAction::trivial(Arc::clone(&g), Arc::clone(a));
    CrossedModule::new(g, Arc::clone(a), vec![0; a.order()], action)
}

fn chunk(flat: Vec<usize>, width: usize) -> Vec<Vec<usize>> {
    flat.chunks(width).map(|c| c.to_vec()).collect()
}

/// A homomorphism of crossed modules: a pair of group homomorphisms
/// `(f: G -> G', F: X -> X')` with `d' o F = f o d` and `F(g.x) = f(g).F(x)`.
#[derive(Clone, Debug)]
pub struct XModHom {
    pub f: Vec<usize>,
    pub big_f: Vec<usize>,
}

impl XModHom {
    pub fn identity(m: &CrossedModule) -> Self {
        XModHom {
            f: (0..m.group().order()).collect(),
            big_f: (0..m.space().order()).collect(),
        }
    }

    /// Checks all homomorphism and compatibility conditions from `source`
    /// to `target`.
    pub fn is_hom(&self, source: &CrossedModule, target: &CrossedModule) -> bool {
        let (g, x) = (source.group(), source.space());
        let (g2, x2) = (target.group(), target.space());
        if self.f.len() != g.order() || self.big_f.len() != x.order() {
            return false;
        }
        if self.f.iter().any(|&v| v >= g2.order()) || self.big_f.iter().any(|&v| v >= x2.order()) {
            return false;
        }
        let f = &self.f;
        let bf = &self.big_f;
        let hom_g = (0..g.order())
            .all(|a| (0..g.order()).all(|b| f[g.mul(a, b)] == g2.mul(f[a], f[b])));
        let hom_x = (0..x.order())
            .all(|a| (0..x.order()).all(|b| bf[x.mul(a, b)] == x2.mul(bf[a], bf[b])));
        let bd = (0..x.order()).all(|a| target.boundary(bf[a]) == f[source.boundary(a)]);
        let eq = (0..g.order())
            .all(|gg| (0..x.order()).all(|a| bf[source.act(gg, a)] == target.act(f[gg], bf[a])));
        hom_g && hom_x && bd && eq
    }

    pub fn is_isomorphism(&self, source: &CrossedModule, target: &CrossedModule) -> bool {
        self.is_hom(source, target) && is_bijection(&self.f) && is_bijection(&self.big_f)
    }

    /// `other` after `self` (self: A -> B, other: B -> C).
    pub fn compose(&self, other: &XModHom) -> XModHom {
        XModHom {
            f: self.f.iter().map(|&v| other.f[v]).collect(),
            big_f: self.big_f.iter().map(|&v| other.big_f[v]).collect(),
        }
    }
}

fn is_bijection(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &v in map {
        if v >= map.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

/// Extends generator images to a full homomorphism table, or fails if the
/// assignment is inconsistent.
fn extend_hom(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let n = src.order();
    let mut f = vec![usize::MAX; n];
    f[src.identity()] = dst.identity();
    let mut frontier = vec![src.identity()];
    for (&g, &im) in gens.iter().zip(images) {
        if f[g] == usize::MAX {
            f[g] = im;
            frontier.push(g);
        } else if f[g] != im {
            return None;
        }
    }
    // close under multiplication by generators on both sides
    while let Some(a) = frontier.pop() {
        for (&g, &im) in gens.iter().zip(images) {
            let p = src.mul(a, g);
            let fp = dst.mul(f[a], im);
            if f[p] == usize::MAX {
                f[p] = fp;
                frontier.push(p);
            } else if f[p] != fp {
                return None;
            }
            let q = src.mul(g, a);
            let fq = dst.mul(im, f[a]);
            if f[q] == usize::MAX {
                f[q] = fq;
                frontier.push(q);
            } else if f[q] != fq {
                return None;
            }
        }
    }
    if f.iter().any(|&v| v == usize::MAX) {
        return None; // gens do not generate src
    }
    // full homomorphism check
    for a in 0..n {
        for b in 0..n {
            if f[src.mul(a, b)] != dst.mul(f[a], f[b]) {
                return None;
            }
        }
    }
    Some(f)
}

/// All crossed-module isomorphisms `source -> target`, by brute force over
/// images of greedy generating sets. The identity pair comes first when
/// source and target coincide elementwise.
pub fn isomorphisms(
    source: &CrossedModule,
    target: &CrossedModule,
    cap: u64,
) -> Result<Vec<XModHom>, XModError> {
    let g = source.group();
    let x = source.space();
    let g2 = target.group();
    let x2 = target.space();
    if g.order() != g2.order() || x.order() != x2.order() {
        return Ok(Vec::new());
    }
    let gens_g = g.generating_set();
    let gens_x = x.generating_set();
    let count_g = (g2.order() as u64).checked_pow(gens_g.len() as u32);
    let count_x = (x2.order() as u64).checked_pow(gens_x.len() as u32);
    let total = count_g.and_then(|a| count_x.and_then(|b| a.checked_mul(b)));
    match total {
        Some(t) if t <= cap => {}
        _ => {
            return Err(XModError::SizeLimit(total.unwrap_or(u64::MAX), cap));
        }
    }

    let mut homs_g: Vec<Vec<usize>> = Vec::new();
    for images in tuples(g2.order(), gens_g.len()) {
        if let Some(f) = extend_hom(g, g2, &gens_g, &images) {
            if is_bijection(&f) {
                homs_g.push(f);
            }
        }
    }
    let mut homs_x: Vec<Vec<usize>> = Vec::new();
    for images in tuples(x2.order(), gens_x.len()) {
        if let Some(f) = extend_hom(x, x2, &gens_x, &images) {
            if is_bijection(&f) {
                homs_x.push(f);
            }
        }
    }

    let mut out = Vec::new();
    for f in &homs_g {
        for bf in &homs_x {
            let h = XModHom {
                f: f.clone(),
                big_f: bf.clone(),
            };
            if h.is_hom(source, target) {
                out.push(h);
            }
        }
    }
    // deterministic order with the identity first when present
    out.sort_by(|a, b| {
        let ida = a.f.iter().enumerate().all(|(i, &v)| i == v)
            && a.big_f.iter().enumerate().all(|(i, &v)| i == v);
        let idb = b.f.iter().enumerate().all(|(i, &v)| i == v)
            && b.big_f.iter().enumerate().all(|(i, &v)| i == v);
        idb.cmp(&ida)
            .then_with(|| a.f.cmp(&b.f))
            .then_with(|| a.big_f.cmp(&b.big_f))
    });
    Ok(out)
}

/// All automorphisms of a crossed module.
pub fn automorphisms(m: &CrossedModule, cap: u64) -> Result<Vec<XModHom>, XModError> {
    isomorphisms(m, m, cap)
}

fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (base as u64).pow(len as u32);
    (0..total).map(move |mut code| {
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push((code % base as u64) as usize);
            code /= base as u64;
        }
        out
    })
}
