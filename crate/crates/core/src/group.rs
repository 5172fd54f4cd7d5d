//! Finite groups given extensionally by multiplication tables, together with
//! the orbit/stabilizer/coset machinery used throughout the crate.
//!
//! Elements are indices `0..order`. Every group built here is validated:
//! associativity over all triples, a two-sided identity and a full inverse
//! table. Orders are capped at [`MAX_GROUP_ORDER`] so every later operation
//! stays a pure table lookup at desk scale.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported group order (the symmetric group on 5 letters).
pub const MAX_GROUP_ORDER: usize = 120;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("group is not abelian")]
    NotAbelian,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("invalid group action: {0}")]
    InvalidAction(String),
}

/// A finite group stored as a multiplication table.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    names: Option<Vec<String>>,
}

/// Structural equality: same multiplication table (names ignored).
impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mul == other.mul
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl FiniteGroup {
    /// Builds a group from an explicit table, checking all group axioms.
    pub fn from_table(
        mul: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let order = mul.len();
        if order == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::SizeLimit(format!(
                "order {order} exceeds maximum {MAX_GROUP_ORDER}"
            )));
        }
        let mut flat = Vec::with_capacity(order * order);
        for (i, row) in mul.iter().enumerate() {
            if row.len() != order {
                return Err(GroupError::InvalidTable(format!(
                    "row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(GroupError::InvalidTable(format!(
                        "entry ({i},{j}) = {v} out of range"
                    )));
                }
                flat.push(v);
            }
        }
        if let Some(ref ns) = names {
            if ns.len() != order {
                return Err(GroupError::InvalidTable(format!(
                    "{} names for {order} elements",
                    ns.len()
                )));
            }
        }
        Self::finish(order, flat, names)
    }

    fn finish(
        order: usize,
        mul: Vec<usize>,
        names: Option<Vec<String>>,
    ) -> Result<Self, GroupError> {
        let at = |a: usize, b: usize| mul[a * order + b];
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| GroupError::InvalidTable("no two-sided identity".into()))?;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {x} has no inverse")))?;
            inv[x] = y;
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    if at(at(a, b), c) != at(a, at(b, c)) {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            order,
            mul,
            inv,
            identity,
            names,
        })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// The cyclic group of order `n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1 && n <= MAX_GROUP_ORDER, "cyclic order out of range");
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push((a + b) % n);
            }
        }
        let inv = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup {
            order: n,
            mul,
            inv,
            identity: 0,
            names: None,
        }
    }

    /// The dihedral group of order `2n`; element `j*n + i` is `r^i s^j`.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 1 && 2 * n <= MAX_GROUP_ORDER, "dihedral order out of range");
        let order = 2 * n;
        let idx = |i: usize, j: usize| j * n + i;
        let mut mul = vec![0usize; order * order];
        for j1 in 0..2 {
            for i1 in 0..n {
                for j2 in 0..2 {
                    for i2 in 0..n {
                        // r^i1 s^j1 r^i2 s^j2 = r^(i1 + (-1)^j1 i2) s^(j1+j2)
                        let i = if j1 == 0 {
                            (i1 + i2) % n
                        } else {
                            (i1 + n - i2 % n) % n
                        };
                        let j = (j1 + j2) % 2;
                        mul[idx(i1, j1) * order + idx(i2, j2)] = idx(i, j);
                    }
                }
            }
        }
        Self::finish(order, mul, None).expect("dihedral table is a group")
    }

    /// The symmetric group on `n` letters, `n <= 5`; elements are the
    /// permutations of `0..n` in lexicographic order of one-line notation.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > 5 {
            return Err(GroupError::SizeLimit(format!(
                "symmetric group on {n} letters not supported (1..=5)"
            )));
        }
        let perms = permutations(n);
        let order = perms.len();
        let index_of = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let mut mul = vec![0usize; order * order];
        for (a, p) in perms.iter().enumerate() {
            for (b, q) in perms.iter().enumerate() {
                // (p*q)(i) = p(q(i))
                let comp: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                mul[a * order + b] = index_of(&comp);
            }
        }
        let names = perms
            .iter()
            .map(|p| {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("[{}]", s.join(" "))
            })
            .collect();
        Self::finish(order, mul, Some(names))
    }

    /// Direct product; element `a * other.order + b` is the pair `(a, b)`.
    pub fn direct_product(&self, other: &FiniteGroup) -> Result<Self, GroupError> {
        let order = self.order * other.order;
        if order > MAX_GROUP_ORDER {
            return Err(GroupError::SizeLimit(format!(
                "product order {order} exceeds maximum {MAX_GROUP_ORDER}"
            )));
        }
        let idx = |a: usize, b: usize| a * other.order + b;
        let mut mul = vec![0usize; order * order];
        for a1 in 0..self.order {
            for b1 in 0..other.order {
                for a2 in 0..self.order {
                    for b2 in 0..other.order {
                        mul[idx(a1, b1) * order + idx(a2, b2)] =
                            idx(self.mul(a1, a2), other.mul(b1, b2));
                    }
                }
            }
        }
        Self::finish(order, mul, None)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `a * b * a^{-1}`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn name(&self, x: usize) -> String {
        match &self.names {
            Some(ns) => ns[x].clone(),
            None => x.to_string(),
        }
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes, each sorted; classes ordered by minimal element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = (0..self.order).map(|g| self.conj(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Centralizer of `x`: all `g` with `gx = xg`.
    pub fn centralizer(&self, x: usize) -> Vec<usize> {
        (0..self.order)
            .filter(|&g| self.mul(g, x) == self.mul(x, g))
            .collect()
    }

    pub fn is_subgroup(&self, elems: &[usize]) -> bool {
        if !elems.contains(&self.identity) {
            return false;
        }
        elems.iter().all(|&a| {
            elems.contains(&self.inv(a)) && elems.iter().all(|&b| elems.contains(&self.mul(a, b)))
        })
    }

    /// Closure of `gens` under multiplication, sorted.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[self.identity] = true;
        let mut frontier: Vec<usize> = vec![self.identity];
        for &g in gens {
            if !in_set[g] {
                in_set[g] = true;
                frontier.push(g);
            }
        }
        while let Some(a) = frontier.pop() {
            for g in gens.iter().copied().chain(std::iter::once(a)) {
                let p = self.mul(a, g);
                if !in_set[p] {
                    in_set[p] = true;
                    frontier.push(p);
                }
                let q = self.mul(g, a);
                if !in_set[q] {
                    in_set[q] = true;
                    frontier.push(q);
                }
            }
        }
        (0..self.order).filter(|&x| in_set[x]).collect()
    }

    pub fn is_normal(&self, sub: &[usize]) -> bool {
        self.is_subgroup(sub)
            && (0..self.order)
                .all(|g| sub.iter().all(|&n| sub.contains(&self.conj(g, n))))
    }

    /// Left-coset representatives of `sub` in the group, identity first.
    pub fn coset_reps(&self, sub: &[usize]) -> Result<Vec<usize>, GroupError> {
        if !self.is_subgroup(sub) {
            return Err(GroupError::NotASubgroup(format!("{sub:?}")));
        }
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in std::iter::once(self.identity).chain(0..self.order) {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in sub {
                covered[self.mul(g, h)] = true;
            }
        }
        Ok(reps)
    }

    /// The subgroup on `elems` as a standalone group plus the embedding of
    /// its element indices back into `self`.
    pub fn subgroup_group(&self, elems: &[usize]) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_subgroup(elems) {
            return Err(GroupError::NotASubgroup(format!("{elems:?}")));
        }
        let mut embed: Vec<usize> = elems.to_vec();
        embed.sort_unstable();
        let mut pos = vec![usize::MAX; self.order];
        for (i, &e) in embed.iter().enumerate() {
            pos[e] = i;
        }
        let n = embed.len();
        let mut mul = vec![0usize; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = pos[self.mul(embed[i], embed[j])];
            }
        }
        let names = self
            .names
            .as_ref()
            .map(|ns| embed.iter().map(|&e| ns[e].clone()).collect());
        let sub = Self::finish(n, mul, names)?;
        Ok((sub, embed))
    }

    /// A (not necessarily minimal) generating set, found greedily.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut closure = vec![self.identity];
        for x in 0..self.order {
            if !closure.contains(&x) {
                gens.push(x);
                closure = self.subgroup_closure(&gens);
                if closure.len() == self.order {
                    break;
                }
            }
        }
        gens
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next_permutation in lexicographic order
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Requested group shape, mirroring the instance-file syntax.
#[derive(Clone, Debug)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    DirectProduct(Box<GroupSpec>, Box<GroupSpec>),
    FromTable {
        mul: Vec<Vec<usize>>,
        names: Option<Vec<String>>,
    },
}

/// Builds and validates a group from a [`GroupSpec`].
pub fn make_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    match spec {
        GroupSpec::Cyclic(n) => {
            if *n == 0 || *n > MAX_GROUP_ORDER {
                return Err(GroupError::SizeLimit(format!("cyclic order {n}")));
            }
            Ok(FiniteGroup::cyclic(*n))
        }
        GroupSpec::Dihedral(n) => {
            if *n == 0 || 2 * n > MAX_GROUP_ORDER {
                return Err(GroupError::SizeLimit(format!("dihedral parameter {n}")));
            }
            Ok(FiniteGroup::dihedral(*n))
        }
        GroupSpec::Symmetric(n) => FiniteGroup::symmetric(*n),
        GroupSpec::DirectProduct(a, b) => make_group(a)?.direct_product(&make_group(b)?),
        GroupSpec::FromTable { mul, names } => FiniteGroup::from_table(mul.clone(), names.clone()),
    }
}

/// A left action of one finite group on another by group automorphisms.
#[derive(Clone)]
pub struct GroupAction {
    acting: Arc<FiniteGroup>,
    space: Arc<FiniteGroup>,
    table: Vec<usize>,
}

impl fmt::Debug for GroupAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GroupAction({} on {})",
            self.acting.order(),
            self.space.order()
        )
    }
}

impl PartialEq for GroupAction {
    fn eq(&self, other: &Self) -> bool {
        self.acting == other.acting && self.space == other.space && self.table == other.table
    }
}

impl Eq for GroupAction {}

impl GroupAction {
    /// Validates the action axioms and the automorphism property of every
    /// `table[g]`.
    pub fn new(
        acting: Arc<FiniteGroup>,
        space: Arc<FiniteGroup>,
        table: Vec<Vec<usize>>,
    ) -> Result<Self, GroupError> {
        let ng = acting.order();
        let nx = space.order();
        if table.len() != ng {
            return Err(GroupError::InvalidAction(format!(
                "{} rows for acting group of order {ng}",
                table.len()
            )));
        }
        let mut flat = Vec::with_capacity(ng * nx);
        for (g, row) in table.iter().enumerate() {
            if row.len() != nx {
                return Err(GroupError::InvalidAction(format!(
                    "row {g} has length {}, expected {nx}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= nx {
                    return Err(GroupError::InvalidAction(format!(
                        "row {g} maps outside the space"
                    )));
                }
                flat.push(v);
            }
        }
        let action = GroupAction {
            acting,
            space,
            table: flat,
        };
        action.validate()?;
        Ok(action)
    }

    fn validate(&self) -> Result<(), GroupError> {
        let g0 = self.acting.identity();
        let ng = self.acting.order();
        let nx = self.space.order();
        for x in 0..nx {
            if self.apply(g0, x) != x {
                return Err(GroupError::InvalidAction(format!(
                    "identity moves element {x}"
                )));
            }
        }
        for g in 0..ng {
            for h in 0..ng {
                for x in 0..nx {
                    if self.apply(g, self.apply(h, x)) != self.apply(self.acting.mul(g, h), x) {
                        return Err(GroupError::InvalidAction(format!(
                            "not a left action at (g={g}, h={h}, x={x})"
                        )));
                    }
                }
            }
        }
        for g in 0..ng {
            for x in 0..nx {
                for y in 0..nx {
                    if self.apply(g, self.space.mul(x, y))
                        != self.space.mul(self.apply(g, x), self.apply(g, y))
                    {
                        return Err(GroupError::InvalidAction(format!(
                            "table[{g}] is not an automorphism at ({x},{y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The trivial action.
    pub fn trivial(acting: Arc<FiniteGroup>, space: Arc<FiniteGroup>) -> Self {
        let ng = acting.order();
        let nx = space.order();
        let mut table = Vec::with_capacity(ng * nx);
        for _ in 0..ng {
            table.extend(0..nx);
        }
        GroupAction {
            acting,
            space,
            table,
        }
    }

    /// The conjugation action of a group on itself.
    pub fn conjugation(group: &Arc<FiniteGroup>) -> Self {
        let n = group.order();
        let mut table = Vec::with_capacity(n * n);
        for g in 0..n {
            for x in 0..n {
                table.push(group.conj(g, x));
            }
        }
        GroupAction {
            acting: Arc::clone(group),
            space: Arc::clone(group),
            table,
        }
    }

    pub fn acting(&self) -> &Arc<FiniteGroup> {
        &self.acting
    }

    pub fn space(&self) -> &Arc<FiniteGroup> {
        &self.space
    }

    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.table[g * self.space.order() + x]
    }

    /// Orbit partition; orbits are sorted and ordered by their minimal
    /// element, so the representative of each orbit is its first entry.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let nx = self.space.order();
        let ng = self.acting.order();
        let mut seen = vec![false; nx];
        let mut orbits = Vec::new();
        for x in 0..nx {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..ng).map(|g| self.apply(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn orbit_of(&self, x: usize) -> Vec<usize> {
        let ng = self.acting.order();
        let mut orbit: Vec<usize> = (0..ng).map(|g| self.apply(g, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        orbit
    }

    /// The stabilizer subgroup of `x`, sorted.
    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        (0..self.acting.order())
            .filter(|&g| self.apply(g, x) == x)
            .collect()
    }
}

/// Orbit partition of an action (see [`GroupAction::orbits`]).
pub fn orbits(action: &GroupAction) -> Vec<Vec<usize>> {
    action.orbits()
}

/// Stabilizer subgroup of `x` under an action.
pub fn stabilizer(action: &GroupAction, x: usize) -> Vec<usize> {
    action.stabilizer(x)
}
