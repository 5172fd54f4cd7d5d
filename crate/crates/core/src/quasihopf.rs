//! The generalized twisted-double quasi-Hopf algebra of a normalized
//! quasi-abelian 3-cocycle, and exhaustive verification of the
//! quasi-triangular quasi-Hopf axioms.
//!
//! The algebra has basis `{t_x g}` over `X x G` with
//!
//! * product `(t_x g)(t_y h) = [x = h.y] gamma_{g,h}(y)^{-1} t_y (gh)`
//! * coproduct `D(t_x g) = sum_{ab=x} mu_g(a,b) t_a g (x) t_b g`
//! * counit `e(t_x g) = [x = e]`
//! * associator `Phi = sum omega(x,y,z) t_x e (x) t_y e (x) t_z e`
//! * R-matrix `R = sum c(x,y) t_x e (x) t_y d(x)`
//! * `alpha = 1`, `beta = sum omega(x^{-1},x,x^{-1}) t_x e`
//! * antipode `S(t_x g) = gamma_{g^{-1},g}(x^{-1}) / mu_g(x,x^{-1}) t_{g.x^{-1}} g^{-1}`
//!
//! All structure constants are roots of unity kept as exponents; axiom
//! checks render them to complex numbers and work in sparse tensor powers,
//! never materializing dense `dim^3` arrays.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::cohomology::{self, QaCocycle};
use crate::numeric::{self, CMat, NumericError};
use crate::scalar::phase;
use crate::xmod::CrossedModule;

/// Default cap on the algebra dimension `|X| |G|`.
pub const DEFAULT_QHOPF_DIM_CAP: usize = 64;

const COEFF_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum QuasiHopfError {
    #[error("cocycle must be normalized and valid (condition ({0}) fails)")]
    InvalidCocycle(&'static str),
    #[error("cocycle must be normalized")]
    NotNormalized,
    #[error("dimension {0} exceeds cap {1}")]
    SizeLimit(usize, usize),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// Structure constants of the quasi-Hopf algebra `H(xi)`.
#[derive(Clone, Debug)]
pub struct QuasiHopf {
    module: Arc<CrossedModule>,
    level: i64,
    nx: usize,
    ng: usize,
    pub dim: usize,
    /// `product[i*dim + j] = Some((exp, k))` when `b_i b_j = zeta^exp b_k`.
    product: Vec<Option<(i64, u32)>>,
    /// `coproduct[i]` lists `(exp, a, b)` with `D(b_i) = sum zeta^exp b_a (x) b_b`.
    coproduct: Vec<Vec<(i64, u32, u32)>>,
    /// `counit[i] = Some(exp)` when `e(b_i) = zeta^exp`, else zero.
    counit: Vec<Option<i64>>,
    phi: Vec<([u32; 3], i64)>,
    phi_inv: Vec<([u32; 3], i64)>,
    r_mat: Vec<([u32; 2], i64)>,
    r_inv: Vec<([u32; 2], i64)>,
    alpha: Vec<(u32, i64)>,
    beta: Vec<(u32, i64)>,
    /// `antipode[i] = (exp, k)` with `S(b_i) = zeta^exp b_k`.
    antipode: Vec<(i64, u32)>,
}

impl QuasiHopf {
    #[inline]
    pub fn basis_index(&self, x: usize, g: usize) -> usize {
        x * self.ng + g
    }

    #[inline]
    pub fn basis_pair(&self, i: usize) -> (usize, usize) {
        (i / self.ng, i % self.ng)
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn module(&self) -> &Arc<CrossedModule> {
        &self.module
    }

    pub fn product_entry(&self, i: usize, j: usize) -> Option<(i64, u32)> {
        self.product[i * self.dim + j]
    }

    pub fn coproduct_entries(&self, i: usize) -> &[(i64, u32, u32)] {
        &self.coproduct[i]
    }

    pub fn counit_entry(&self, i: usize) -> Option<i64> {
        self.counit[i]
    }

    pub fn phi_entries(&self) -> &[([u32; 3], i64)] {
        &self.phi
    }

    pub fn r_entries(&self) -> &[([u32; 2], i64)] {
        &self.r_mat
    }

    pub fn r_inv_entries(&self) -> &[([u32; 2], i64)] {
        &self.r_inv
    }

    pub fn alpha_entries(&self) -> &[(u32, i64)] {
        &self.alpha
    }

    pub fn beta_entries(&self) -> &[(u32, i64)] {
        &self.beta
    }

    pub fn antipode_entry(&self, i: usize) -> (i64, u32) {
        self.antipode[i]
    }
}

/// Builds the structure constants of `H(xi)` for a normalized valid cocycle.
pub fn build_qhopf(xi: &QaCocycle, dim_cap: usize) -> Result<QuasiHopf, QuasiHopfError> {
    if !xi.is_normalized() {
        return Err(QuasiHopfError::NotNormalized);
    }
    let report = cohomology::check_qa3(xi);
    if let Some(bad) = report.conditions.iter().find(|c| !c.ok) {
        return Err(QuasiHopfError::InvalidCocycle(bad.condition.label()));
    }
    let m = Arc::clone(xi.module());
    let nx = m.space().order();
    let ng = m.group().order();
    let dim = nx * ng;
    if dim > dim_cap {
        return Err(QuasiHopfError::SizeLimit(dim, dim_cap));
    }
    let level = xi.level();
    let xg = m.space();
    let gg = m.group();
    let eg = gg.identity();
    let ex = xg.identity();
    let idx = |x: usize, g: usize| (x * ng + g) as u32;

    let mut product = vec![None; dim * dim];
    for x in 0..nx {
        for g in 0..ng {
            for y in 0..nx {
                for h in 0..ng {
                    if x != m.act(h, y) {
                        continue;
                    }
                    let exp = (-xi.gamma(g, h, y)).rem_euclid(level);
                    product[(idx(x, g) as usize) * dim + idx(y, h) as usize] =
                        Some((exp, idx(y, gg.mul(g, h))));
                }
            }
        }
    }

    let mut coproduct = vec![Vec::new(); dim];
    for x in 0..nx {
        for g in 0..ng {
            let mut terms = Vec::with_capacity(nx);
            for a in 0..nx {
                let b = xg.mul(xg.inv(a), x);
                terms.push((xi.mu(g, a, b), idx(a, g), idx(b, g)));
            }
            coproduct[idx(x, g) as usize] = terms;
        }
    }

    let mut counit = vec![None; dim];
    for g in 0..ng {
        counit[idx(ex, g) as usize] = Some(0);
    }

    let mut phi = Vec::with_capacity(nx * nx * nx);
    let mut phi_inv = Vec::with_capacity(nx * nx * nx);
    for x in 0..nx {
        for y in 0..nx {
            for z in 0..nx {
                let key = [idx(x, eg), idx(y, eg), idx(z, eg)];
                phi.push((key, xi.omega(x, y, z)));
                phi_inv.push((key, (-xi.omega(x, y, z)).rem_euclid(level)));
            }
        }
    }

    let mut r_mat = Vec::with_capacity(nx * nx);
    let mut r_inv = Vec::with_capacity(nx * nx);
    for x in 0..nx {
        let xinv = xg.inv(x);
        for y in 0..nx {
            r_mat.push(([idx(x, eg), idx(y, m.boundary(x))], xi.c(x, y)));
            // R^{-1} = sum c(x, x^{-1}yx)^{-1} gamma_{d(x),d(x^{-1})}(y)^{-1}
            //          t_x e (x) t_y d(x^{-1})
            let conj_y = xg.mul(xg.mul(xinv, y), x);
            let exp = (-(xi.c(x, conj_y) + xi.gamma(m.boundary(x), m.boundary(xinv), y)))
                .rem_euclid(level);
            r_inv.push(([idx(x, eg), idx(y, m.boundary(xinv))], exp));
        }
    }

    let alpha = (0..nx).map(|x| (idx(x, eg), 0)).collect();
    let beta = (0..nx)
        .map(|x| {
            let xinv = xg.inv(x);
            (idx(x, eg), xi.omega(xinv, x, xinv))
        })
        .collect();

    let mut antipode = vec![(0, 0); dim];
    for x in 0..nx {
        let xinv = xg.inv(x);
        for g in 0..ng {
            let exp = (xi.gamma(gg.inv(g), g, xinv) - xi.mu(g, x, xinv)).rem_euclid(level);
            antipode[idx(x, g) as usize] = (exp, idx(m.act(g, xinv), gg.inv(g)));
        }
    }

    Ok(QuasiHopf {
        module: m,
        level,
        nx,
        ng,
        dim,
        product,
        coproduct,
        counit,
        phi,
        phi_inv,
        r_mat,
        r_inv,
        alpha,
        beta,
        antipode,
    })
}

/// Sparse element of a tensor power of the algebra; unused key slots are 0.
#[derive(Clone, Debug)]
struct Tensor {
    arity: usize,
    terms: HashMap<[u32; 4], Complex64>,
}

impl Tensor {
    fn new(arity: usize) -> Self {
        Tensor {
            arity,
            terms: HashMap::new(),
        }
    }

    fn add(&mut self, key: [u32; 4], coeff: Complex64) {
        if coeff.norm_sqr() == 0.0 {
            return;
        }
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        if entry.norm() < 1e-15 {
            self.terms.remove(&key);
        }
    }

    fn max_diff(&self, other: &Tensor) -> (f64, Option<[u32; 4]>) {
        debug_assert_eq!(self.arity, other.arity);
        let mut worst = 0.0f64;
        let mut at = None;
        for (k, v) in &self.terms {
            let w = other.terms.get(k).copied().unwrap_or_default();
            let d = (v - w).norm();
            if d > worst {
                worst = d;
                at = Some(*k);
            }
        }
        for (k, w) in &other.terms {
            if !self.terms.contains_key(k) {
                let d = w.norm();
                if d > worst {
                    worst = d;
                    at = Some(*k);
                }
            }
        }
        (worst, at)
    }
}

impl QuasiHopf {
    fn zeta(&self, exp: i64) -> Complex64 {
        phase(exp, self.level)
    }

    fn unit_tensor(&self, arity: usize) -> Tensor {
        // 1 = sum over x of t_x e in each slot
        let mut t = Tensor::new(arity);
        let eg = self.module.group().identity();
        let mut stack = vec![[0u32; 4]];
        for slot in 0..arity {
            let mut next = Vec::with_capacity(stack.len() * self.nx);
            for key in stack {
                for x in 0..self.nx {
                    let mut k = key;
                    k[slot] = self.basis_index(x, eg) as u32;
                    next.push(k);
                }
            }
            stack = next;
        }
        for key in stack {
            t.add(key, Complex64::new(1.0, 0.0));
        }
        t
    }

    fn from_sparse1(&self, entries: &[(u32, i64)]) -> Tensor {
        let mut t = Tensor::new(1);
        for &(i, e) in entries {
            t.add([i, 0, 0, 0], self.zeta(e));
        }
        t
    }

    fn from_sparse2(&self, entries: &[([u32; 2], i64)]) -> Tensor {
        let mut t = Tensor::new(2);
        for &([a, b], e) in entries {
            t.add([a, b, 0, 0], self.zeta(e));
        }
        t
    }

    fn from_sparse3(&self, entries: &[([u32; 3], i64)]) -> Tensor {
        let mut t = Tensor::new(3);
        for &([a, b, c], e) in entries {
            t.add([a, b, c, 0], self.zeta(e));
        }
        t
    }

    fn basis_element(&self, i: usize) -> Tensor {
        let mut t = Tensor::new(1);
        t.add([i as u32, 0, 0, 0], Complex64::new(1.0, 0.0));
        t
    }

    /// Componentwise product of two sparse tensors of equal arity.
    fn mul(&self, a: &Tensor, b: &Tensor) -> Tensor {
        debug_assert_eq!(a.arity, b.arity);
        let mut out = Tensor::new(a.arity);
        for (ka, va) in &a.terms {
            'terms: for (kb, vb) in &b.terms {
                let mut key = [0u32; 4];
                let mut coeff = va * vb;
                for slot in 0..a.arity {
                    match self.product[ka[slot] as usize * self.dim + kb[slot] as usize] {
                        Some((exp, target)) => {
                            key[slot] = target;
                            coeff *= self.zeta(exp);
                        }
                        None => continue 'terms,
                    }
                }
                out.add(key, coeff);
            }
        }
        out
    }

    /// Applies the coproduct to one slot, increasing the arity by one.
    fn apply_coproduct(&self, t: &Tensor, slot: usize) -> Tensor {
        let mut out = Tensor::new(t.arity + 1);
        for (k, v) in &t.terms {
            for &(exp, a, b) in &self.coproduct[k[slot] as usize] {
                let mut key = [0u32; 4];
                let mut pos = 0;
                for s in 0..t.arity {
                    if s == slot {
                        key[pos] = a;
                        key[pos + 1] = b;
                        pos += 2;
                    } else {
                        key[pos] = k[s];
                        pos += 1;
                    }
                }
                out.add(key, v * self.zeta(exp));
            }
        }
        out
    }

    /// Applies the counit to one slot, decreasing the arity by one.
    fn apply_counit(&self, t: &Tensor, slot: usize) -> Tensor {
        let mut out = Tensor::new(t.arity - 1);
        for (k, v) in &t.terms {
            let Some(exp) = self.counit[k[slot] as usize] else {
                continue;
            };
            let mut key = [0u32; 4];
            let mut pos = 0;
            for s in 0..t.arity {
                if s != slot {
                    key[pos] = k[s];
                    pos += 1;
                }
            }
            out.add(key, v * self.zeta(exp));
        }
        out
    }

    /// Moves factor `j` of each term into slot `dest[j]`.
    fn permute(&self, t: &Tensor, dest: &[usize]) -> Tensor {
        let mut out = Tensor::new(t.arity);
        for (k, v) in &t.terms {
            let mut key = [0u32; 4];
            for (j, &d) in dest.iter().enumerate() {
                key[d] = k[j];
            }
            out.add(key, *v);
        }
        out
    }

    /// Embeds a tensor into a larger arity: factor `j` lands in
    /// `slots[j]`, all other slots carry the unit `sum_x t_x e`.
    fn embed(&self, t: &Tensor, arity: usize, slots: &[usize]) -> Tensor {
        debug_assert_eq!(t.arity, slots.len());
        let eg = self.module.group().identity();
        let free: Vec<usize> = (0..arity).filter(|s| !slots.contains(s)).collect();
        let mut out = Tensor::new(arity);
        let combos = self.nx.pow(free.len() as u32);
        for (k, v) in &t.terms {
            for combo in 0..combos {
                let mut key = [0u32; 4];
                for (j, &s) in slots.iter().enumerate() {
                    key[s] = k[j];
                }
                let mut c = combo;
                for &s in &free {
                    key[s] = self.basis_index(c % self.nx, eg) as u32;
                    c /= self.nx;
                }
                out.add(key, *v);
            }
        }
        out
    }

    fn apply_antipode(&self, t: &Tensor, slot: usize) -> Tensor {
        let mut out = Tensor::new(t.arity);
        for (k, v) in &t.terms {
            let (exp, target) = self.antipode[k[slot] as usize];
            let mut key = *k;
            key[slot] = target;
            out.add(key, v * self.zeta(exp));
        }
        out
    }
}

/// The verified axiom families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhAxiom {
    AssociativityAndUnit,
    CoproductMorphism,
    Counit,
    QuasiCoassociativity,
    Pentagon,
    CounitAssociator,
    Antipode,
    RIntertwines,
    Hexagons,
    RInverse,
}

impl QhAxiom {
    pub fn label(&self) -> &'static str {
        match self {
            QhAxiom::AssociativityAndUnit => "associativity-and-unit",
            QhAxiom::CoproductMorphism => "coproduct-morphism",
            QhAxiom::Counit => "counit",
            QhAxiom::QuasiCoassociativity => "quasi-coassociativity",
            QhAxiom::Pentagon => "pentagon",
            QhAxiom::CounitAssociator => "counit-associator",
            QhAxiom::Antipode => "antipode",
            QhAxiom::RIntertwines => "r-intertwines",
            QhAxiom::Hexagons => "hexagons",
            QhAxiom::RInverse => "r-inverse",
        }
    }

    pub const ALL: [QhAxiom; 10] = [
        QhAxiom::AssociativityAndUnit,
        QhAxiom::CoproductMorphism,
        QhAxiom::Counit,
        QhAxiom::QuasiCoassociativity,
        QhAxiom::Pentagon,
        QhAxiom::CounitAssociator,
        QhAxiom::Antipode,
        QhAxiom::RIntertwines,
        QhAxiom::Hexagons,
        QhAxiom::RInverse,
    ];
}

#[derive(Clone, Debug)]
pub struct QhAxiomResult {
    pub axiom: QhAxiom,
    pub ok: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct QhReport {
    pub axioms: Vec<QhAxiomResult>,
}

impl QhReport {
    pub fn passes(&self) -> bool {
        self.axioms.iter().all(|a| a.ok)
    }
}

fn check_tensor_eq(lhs: &Tensor, rhs: &Tensor, what: &str) -> Option<String> {
    let (diff, at) = lhs.max_diff(rhs);
    if diff > COEFF_TOL {
        Some(format!(
            "{what}: max coefficient deviation {diff:.3e} at basis tuple {:?}",
            at.unwrap_or_default()
        ))
    } else {
        None
    }
}

fn check_axiom(h: &QuasiHopf, axiom: QhAxiom) -> Option<String> {
    let dim = h.dim;
    let one = h.unit_tensor(1);
    match axiom {
        QhAxiom::AssociativityAndUnit => {
            for i in 0..dim {
                for j in 0..dim {
                    for k in 0..dim {
                        let ij = h.product[i * dim + j];
                        let jk = h.product[j * dim + k];
                        let left = ij.and_then(|(e1, t1)| {
                            h.product[t1 as usize * dim + k].map(|(e2, t2)| (e1 + e2, t2))
                        });
                        let right = jk.and_then(|(e1, t1)| {
                            h.product[i * dim + t1 as usize].map(|(e2, t2)| (e1 + e2, t2))
                        });
                        let ok = match (left, right) {
                            (None, None) => true,
                            (Some((e1, t1)), Some((e2, t2))) => {
                                t1 == t2 && (e1 - e2).rem_euclid(h.level) == 0
                            }
                            _ => false,
                        };
                        if !ok {
                            return Some(format!("associativity fails at basis ({i},{j},{k})"));
                        }
                    }
                }
            }
            for i in 0..dim {
                let b = h.basis_element(i);
                if let Some(w) = check_tensor_eq(&h.mul(&one, &b), &b, "left unit") {
                    return Some(format!("{w} (basis {i})"));
                }
                if let Some(w) = check_tensor_eq(&h.mul(&b, &one), &b, "right unit") {
                    return Some(format!("{w} (basis {i})"));
                }
            }
            None
        }
        QhAxiom::CoproductMorphism => {
            let unit2 = h.unit_tensor(2);
            if let Some(w) = check_tensor_eq(
                &h.apply_coproduct(&one, 0),
                &unit2,
                "coproduct of the unit",
            ) {
                return Some(w);
            }
            for i in 0..dim {
                for j in 0..dim {
                    let lhs = {
                        let mut t = Tensor::new(2);
                        if let Some((e, k)) = h.product[i * dim + j] {
                            for &(me, a, b) in &h.coproduct[k as usize] {
                                t.add([a, b, 0, 0], h.zeta(e + me));
                            }
                        }
                        t
                    };
                    let da = h.apply_coproduct(&h.basis_element(i), 0);
                    let db = h.apply_coproduct(&h.basis_element(j), 0);
                    let rhs = h.mul(&da, &db);
                    if let Some(w) = check_tensor_eq(&lhs, &rhs, "coproduct morphism") {
                        return Some(format!("{w} (basis pair ({i},{j}))"));
                    }
                }
            }
            None
        }
        QhAxiom::Counit => {
            // counit laws
            for i in 0..dim {
                let b = h.basis_element(i);
                let d = h.apply_coproduct(&b, 0);
                if let Some(w) = check_tensor_eq(&h.apply_counit(&d, 0), &b, "(e x id) o D") {
                    return Some(format!("{w} (basis {i})"));
                }
                if let Some(w) = check_tensor_eq(&h.apply_counit(&d, 1), &b, "(id x e) o D") {
                    return Some(format!("{w} (basis {i})"));
                }
            }
            // counit is an algebra map
            let eps = |t: &Tensor| -> Complex64 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, v) in &t.terms {
                    if let Some(exp) = h.counit[k[0] as usize] {
                        acc += v * h.zeta(exp);
                    }
                }
                acc
            };
            if (eps(&one) - 1.0).norm() > COEFF_TOL {
                return Some("counit of the unit is not 1".into());
            }
            for i in 0..dim {
                for j in 0..dim {
                    let prod = h.mul(&h.basis_element(i), &h.basis_element(j));
                    let lhs = eps(&prod);
                    let ei = h.counit[i].map(|e| h.zeta(e)).unwrap_or_default();
                    let ej = h.counit[j].map(|e| h.zeta(e)).unwrap_or_default();
                    if (lhs - ei * ej).norm() > COEFF_TOL {
                        return Some(format!("counit is not multiplicative at ({i},{j})"));
                    }
                }
            }
            None
        }
        QhAxiom::QuasiCoassociativity => {
            let phi = h.from_sparse3(&h.phi);
            for i in 0..dim {
                let d = h.apply_coproduct(&h.basis_element(i), 0);
                let lhs = h.mul(&h.apply_coproduct(&d, 1), &phi);
                let rhs = h.mul(&phi, &h.apply_coproduct(&d, 0));
                if let Some(w) = check_tensor_eq(&lhs, &rhs, "(id x D)D . Phi = Phi . (D x id)D")
                {
                    return Some(format!("{w} (basis {i})"));
                }
            }
            None
        }
        QhAxiom::Pentagon => {
            let phi = h.from_sparse3(&h.phi);
            let lhs = h.mul(&h.apply_coproduct(&phi, 2), &h.apply_coproduct(&phi, 0));
            let one_phi = h.embed(&phi, 4, &[1, 2, 3]);
            let phi_one = h.embed(&phi, 4, &[0, 1, 2]);
            let rhs = h.mul(&h.mul(&one_phi, &h.apply_coproduct(&phi, 1)), &phi_one);
            check_tensor_eq(&lhs, &rhs, "pentagon")
        }
        QhAxiom::CounitAssociator => {
            let phi = h.from_sparse3(&h.phi);
            let contracted = h.apply_counit(&phi, 1);
            check_tensor_eq(&contracted, &h.unit_tensor(2), "(id x e x id)(Phi) = 1 x 1")
        }
        QhAxiom::Antipode => {
            // anti-homomorphism
            for i in 0..dim {
                for j in 0..dim {
                    let lhs = h.apply_antipode(&h.mul(&h.basis_element(i), &h.basis_element(j)), 0);
                    let rhs = h.mul(
                        &h.apply_antipode(&h.basis_element(j), 0),
                        &h.apply_antipode(&h.basis_element(i), 0),
                    );
                    if let Some(w) = check_tensor_eq(&lhs, &rhs, "S(ab) = S(b)S(a)") {
                        return Some(format!("{w} (basis pair ({i},{j}))"));
                    }
                }
            }
            if let Some(w) = check_tensor_eq(&h.apply_antipode(&one, 0), &one, "S(1) = 1") {
                return Some(w);
            }
            let alpha = h.from_sparse1(&h.alpha);
            let beta = h.from_sparse1(&h.beta);
            // sum S(a1) alpha a2 = e(a) alpha, sum a1 beta S(a2) = e(a) beta
            for i in 0..dim {
                let d = h.apply_coproduct(&h.basis_element(i), 0);
                let mut lhs1 = Tensor::new(1);
                let mut lhs2 = Tensor::new(1);
                for (k, v) in &d.terms {
                    let a1 = {
                        let mut t = Tensor::new(1);
                        t.add([k[0], 0, 0, 0], *v);
                        t
                    };
                    let a2 = h.basis_element(k[1] as usize);
                    let term1 = h.mul(&h.mul(&h.apply_antipode(&a1, 0), &alpha), &a2);
                    for (kk, vv) in term1.terms {
                        lhs1.add(kk, vv);
                    }
                    let term2 = h.mul(&h.mul(&a1, &beta), &h.apply_antipode(&a2, 0));
                    for (kk, vv) in term2.terms {
                        lhs2.add(kk, vv);
                    }
                }
                let scale = h.counit[i].map(|e| h.zeta(e)).unwrap_or_default();
                let mut rhs1 = Tensor::new(1);
                let mut rhs2 = Tensor::new(1);
                for (k, v) in &alpha.terms {
                    rhs1.add(*k, v * scale);
                }
                for (k, v) in &beta.terms {
                    rhs2.add(*k, v * scale);
                }
                if let Some(w) = check_tensor_eq(&lhs1, &rhs1, "sum S(a1) alpha a2") {
                    return Some(format!("{w} (basis {i})"));
                }
                if let Some(w) = check_tensor_eq(&lhs2, &rhs2, "sum a1 beta S(a2)") {
                    return Some(format!("{w} (basis {i})"));
                }
            }
            // zig-zags through the associator
            let mut zig1 = Tensor::new(1);
            for &([x, y, z], e) in &h.phi {
                let term = h.mul(
                    &h.mul(
                        &h.mul(
                            &h.mul(&h.basis_element(x as usize), &beta),
                            &h.apply_antipode(&h.basis_element(y as usize), 0),
                        ),
                        &alpha,
                    ),
                    &h.basis_element(z as usize),
                );
                for (k, v) in term.terms {
                    zig1.add(k, v * h.zeta(e));
                }
            }
            if let Some(w) = check_tensor_eq(&zig1, &one, "sum X beta S(Y) alpha Z = 1") {
                return Some(w);
            }
            let mut zig2 = Tensor::new(1);
            for &([x, y, z], e) in &h.phi_inv {
                let term = h.mul(
                    &h.mul(
                        &h.mul(
                            &h.mul(&h.apply_antipode(&h.basis_element(x as usize), 0), &alpha),
                            &h.basis_element(y as usize),
                        ),
                        &beta,
                    ),
                    &h.apply_antipode(&h.basis_element(z as usize), 0),
                );
                for (k, v) in term.terms {
                    zig2.add(k, v * h.zeta(e));
                }
            }
            check_tensor_eq(&zig2, &one, "sum S(P) alpha Q beta S(R) = 1")
        }
        QhAxiom::RIntertwines => {
            let r = h.from_sparse2(&h.r_mat);
            for i in 0..dim {
                let d = h.apply_coproduct(&h.basis_element(i), 0);
                let dop = h.permute(&d, &[1, 0]);
                let lhs = h.mul(&dop, &r);
                let rhs = h.mul(&r, &d);
                if let Some(w) = check_tensor_eq(&lhs, &rhs, "D^op(a) R = R D(a)") {
                    return Some(format!("{w} (basis {i})"));
                }
            }
            None
        }
        QhAxiom::Hexagons => {
            let phi = h.from_sparse3(&h.phi);
            let phi_inv = h.from_sparse3(&h.phi_inv);
            let r = h.from_sparse2(&h.r_mat);
            let r13 = h.embed(&r, 3, &[0, 2]);
            let r23 = h.embed(&r, 3, &[1, 2]);
            let r12 = h.embed(&r, 3, &[0, 1]);
            // (D x id)(R) = Phi_312 R13 Phi_132^{-1} R23 Phi_123
            let lhs1 = h.apply_coproduct(&r, 0);
            let rhs1 = h.mul(
                &h.mul(
                    &h.mul(&h.mul(&h.permute(&phi, &[2, 0, 1]), &r13), &h.permute(&phi_inv, &[0, 2, 1])),
                    &r23,
                ),
                &phi,
            );
            if let Some(w) = check_tensor_eq(&lhs1, &rhs1, "hexagon for (D x id)(R)") {
                return Some(w);
            }
            // (id x D)(R) = Phi_231^{-1} R13 Phi_213 R12 Phi_123^{-1}
            let lhs2 = h.apply_coproduct(&r, 1);
            let rhs2 = h.mul(
                &h.mul(
                    &h.mul(&h.mul(&h.permute(&phi_inv, &[1, 2, 0]), &r13), &h.permute(&phi, &[1, 0, 2])),
                    &r12,
                ),
                &phi_inv,
            );
            check_tensor_eq(&lhs2, &rhs2, "hexagon for (id x D)(R)")
        }
        QhAxiom::RInverse => {
            let r = h.from_sparse2(&h.r_mat);
            let rinv = h.from_sparse2(&h.r_inv);
            let unit2 = h.unit_tensor(2);
            if let Some(w) = check_tensor_eq(&h.mul(&r, &rinv), &unit2, "R R^{-1} = 1 x 1") {
                return Some(w);
            }
            check_tensor_eq(&h.mul(&rinv, &r), &unit2, "R^{-1} R = 1 x 1")
        }
    }
}

/// Runs the full axiom battery, reporting per-family outcomes.
pub fn verify_qhopf_axioms(h: &QuasiHopf) -> QhReport {
    let axioms = QhAxiom::ALL
        .iter()
        .map(|&axiom| {
            let witness = check_axiom(h, axiom);
            QhAxiomResult {
                axiom,
                ok: witness.is_none(),
                witness,
            }
        })
        .collect();
    QhReport { axioms }
}

/// Evaluates axioms in order and stops at the first failure.
pub fn first_failing_axiom(h: &QuasiHopf) -> Option<(QhAxiom, String)> {
    for axiom in QhAxiom::ALL {
        if let Some(w) = check_axiom(h, axiom) {
            return Some((axiom, w));
        }
    }
    None
}

/// Dimension of the center `{z : za = az for all a}`.
pub fn center_dimension(h: &QuasiHopf) -> Result<usize, QuasiHopfError> {
    let dim = h.dim;
    let mut constraints = Vec::with_capacity(dim);
    for a in 0..dim {
        // (L_a - R_a) acting on coefficient vectors
        let mut c = CMat::zeros(dim, dim);
        for j in 0..dim {
            if let Some((e, k)) = h.product[a * dim + j] {
                c[(k as usize, j)] += h.zeta(e);
            }
            if let Some((e, k)) = h.product[j * dim + a] {
                c[(k as usize, j)] -= h.zeta(e);
            }
        }
        constraints.push(c);
    }
    Ok(numeric::joint_nullspace(&constraints, dim, 1e-8)?.dim)
}

/// Returns a copy with one random structure constant multiplied by a
/// nontrivial root of unity, plus a description of what changed. Testing
/// hook for the mutation battery; requires level >= 2.
pub fn perturb_random_constant(h: &QuasiHopf, seed: u64) -> (QuasiHopf, String) {
    assert!(h.level >= 2, "perturbation needs a nontrivial root of unity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = h.clone();
    let bump = |e: i64, level: i64| (e + 1).rem_euclid(level);
    loop {
        match rng.random_range(0..6u32) {
            0 => {
                let nonzero: Vec<usize> = (0..h.dim * h.dim)
                    .filter(|&i| h.product[i].is_some())
                    .collect();
                let i = nonzero[rng.random_range(0..nonzero.len())];
                let (e, k) = out.product[i].unwrap();
                out.product[i] = Some((bump(e, h.level), k));
                return (out, format!("product entry {i}"));
            }
            1 => {
                let i = rng.random_range(0..h.dim);
                if out.coproduct[i].is_empty() {
                    continue;
                }
                let j = rng.random_range(0..out.coproduct[i].len());
                let (e, a, b) = out.coproduct[i][j];
                out.coproduct[i][j] = (bump(e, h.level), a, b);
                return (out, format!("coproduct term {j} of basis {i}"));
            }
            2 => {
                let j = rng.random_range(0..out.phi.len());
                let (k, e) = out.phi[j];
                out.phi[j] = (k, bump(e, h.level));
                return (out, format!("associator coefficient {j}"));
            }
            3 => {
                let j = rng.random_range(0..out.r_mat.len());
                let (k, e) = out.r_mat[j];
                out.r_mat[j] = (k, bump(e, h.level));
                return (out, format!("R-matrix coefficient {j}"));
            }
            4 => {
                let i = rng.random_range(0..h.dim);
                let (e, k) = out.antipode[i];
                out.antipode[i] = (bump(e, h.level), k);
                return (out, format!("antipode coefficient of basis {i}"));
            }
            _ => {
                let j = rng.random_range(0..out.beta.len());
                let (k, e) = out.beta[j];
                out.beta[j] = (k, bump(e, h.level));
                return (out, format!("beta coefficient {j}"));
            }
        }
    }
}
