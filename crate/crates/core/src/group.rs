//! Finite groups given by composition tables, with their full subgroup
//! lattice, conjugation action on subgroups and conjugacy classes of
//! subgroups inside every subgroup.
//!
//! Elements are indices `0..order`; element `0` is always the identity.
//! Subgroups are stored as bit masks, which caps the order at 64.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 24;
pub const HARD_MAX_ORDER: usize = 64;

/// Environment variable overriding the group-order bound.
pub const MAX_ORDER_ENV: &str = "TLAB_MAX_ORDER";

/// Order bound from `TLAB_MAX_ORDER`, or the default.
pub fn configured_max_order() -> usize {
    std::env::var(MAX_ORDER_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ORDER)
}

/// Index of a subgroup in the canonical subgroup list of its group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    mask: u64,
    members: Vec<usize>,
}

impl Subgroup {
    fn from_mask(mask: u64) -> Self {
        let members = (0..64).filter(|i| mask >> i & 1 == 1).collect();
        Subgroup { mask, members }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Sorted element indices.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn contains(&self, g: usize) -> bool {
        self.mask >> g & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.mask & !other.mask == 0
    }
}

/// Input for [`FiniteGroup::build`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    /// A family token such as `C4`, `D8`, `S3`, `A4`, or a product `C2xC2`.
    Named(String),
    /// An explicit table: row `i`, column `j` holds the index of `i*j`.
    Table(Vec<Vec<usize>>),
}

#[derive(Deserialize)]
struct TableSpec {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let spec: TableSpec = serde_json::from_str(s).map_err(|e| Error::BadSpec(e.to_string()))?;
            if spec.table.len() != spec.order {
                return Err(Error::BadSpec(format!("table has {} rows but order is {}", spec.table.len(), spec.order)));
            }
            Ok(GroupSpec::Table(spec.table))
        } else if s.is_empty() {
            Err(Error::BadSpec("empty group name".into()))
        } else {
            Ok(GroupSpec::Named(s.to_string()))
        }
    }
}

/// H-conjugacy class representatives of the subgroups of H, in canonical
/// order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgroupClassSet {
    pub ambient: SubgroupId,
    pub representatives: Vec<SubgroupId>,
}

pub struct FiniteGroup {
    name: String,
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    labels: Vec<String>,
    subgroups: Vec<Subgroup>,
    by_mask: HashMap<u64, SubgroupId>,
    // conj[g * nsub + h] = g H g^-1
    conj: Vec<SubgroupId>,
    classes: Vec<Vec<SubgroupId>>,
    // class_index[h][k] = position of the H-class of K in classes[h]
    class_index: Vec<Vec<Option<usize>>>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("name", &self.name).field("order", &self.order).finish()
    }
}

impl FiniteGroup {
    /// Builds and validates a group, honouring `TLAB_MAX_ORDER`.
    pub fn build(spec: &GroupSpec) -> Result<Arc<FiniteGroup>> {
        Self::build_with_bound(spec, configured_max_order())
    }

    pub fn build_with_bound(spec: &GroupSpec, bound: usize) -> Result<Arc<FiniteGroup>> {
        let bound = bound.min(HARD_MAX_ORDER);
        match spec {
            GroupSpec::Named(name) => {
                let (order, perms, labels) = named_family(name, bound)?;
                let table = table_from_perms(&perms);
                debug_assert_eq!(order, perms.len());
                Ok(Arc::new(Self::from_valid_table(normalize_name(name), table, labels)))
            }
            GroupSpec::Table(rows) => {
                let (table, labels) = validate_table(rows, bound)?;
                Ok(Arc::new(Self::from_valid_table(format!("G{}", rows.len()), table, labels)))
            }
        }
    }

    /// Parses a spec string (family token or JSON table) and builds it.
    pub fn parse(spec: &str) -> Result<Arc<FiniteGroup>> {
        Self::build(&spec.parse()?)
    }

    fn from_valid_table(name: String, table: Vec<usize>, labels: Vec<String>) -> Self {
        let order = labels.len();
        let mut inverse = vec![0; order];
        for a in 0..order {
            for b in 0..order {
                if table[a * order + b] == 0 {
                    inverse[a] = b;
                }
            }
        }
        let mut group = FiniteGroup {
            name,
            order,
            table,
            inverse,
            labels,
            subgroups: Vec::new(),
            by_mask: HashMap::new(),
            conj: Vec::new(),
            classes: Vec::new(),
            class_index: Vec::new(),
        };
        group.enumerate_subgroups();
        group
    }

    fn closure(&self, mut mask: u64) -> u64 {
        loop {
            let members: Vec<usize> = (0..self.order).filter(|i| mask >> i & 1 == 1).collect();
            let mut next = mask | 1;
            for &a in &members {
                for &b in &members {
                    next |= 1 << self.mul(a, b);
                }
            }
            if next == mask {
                return mask;
            }
            mask = next;
        }
    }

    // Subgroups are reached by adjoining one element at a time to known
    // subgroups; every subgroup is generated this way from the trivial one.
    fn enumerate_subgroups(&mut self) {
        let n = self.order;
        let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut queue = vec![1u64];
        seen.insert(1);
        while let Some(h) = queue.pop() {
            let order_h = h.count_ones() as usize;
            for g in 0..n {
                if h >> g & 1 == 1 {
                    continue;
                }
                // Lagrange: a proper overgroup of index < 2 is the whole group.
                let joined = if 2 * order_h > n { full } else { self.closure(h | 1 << g) };
                if seen.insert(joined) {
                    queue.push(joined);
                }
            }
        }
        let mut subs: Vec<Subgroup> = seen.into_iter().map(Subgroup::from_mask).collect();
        subs.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        self.by_mask = subs.iter().enumerate().map(|(i, s)| (s.mask, SubgroupId(i))).collect();
        self.subgroups = subs;

        let nsub = self.subgroups.len();
        let mut conj = Vec::with_capacity(n * nsub);
        for g in 0..n {
            let gi = self.inverse[g];
            for s in &self.subgroups {
                let mut m = 0u64;
                for &h in &s.members {
                    m |= 1 << self.mul(self.mul(g, h), gi);
                }
                conj.push(self.by_mask[&m]);
            }
        }
        self.conj = conj;

        let mut classes = Vec::with_capacity(nsub);
        let mut class_index = Vec::with_capacity(nsub);
        for h in 0..nsub {
            let hs = &self.subgroups[h];
            let mut reps: BTreeSet<SubgroupId> = BTreeSet::new();
            let mut rep_of = vec![None; nsub];
            for k in 0..nsub {
                if !self.subgroups[k].is_subgroup_of(hs) {
                    continue;
                }
                let rep = hs.members.iter().map(|&x| self.conj[x * nsub + k]).min().expect("subgroup has the identity");
                reps.insert(rep);
                rep_of[k] = Some(rep);
            }
            let reps: Vec<SubgroupId> = reps.into_iter().collect();
            let idx = rep_of.into_iter().map(|r| r.map(|r| reps.binary_search(&r).expect("rep listed"))).collect();
            classes.push(reps);
            class_index.push(idx);
        }
        self.classes = classes;
        self.class_index = class_index;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn subgroups(&self) -> impl Iterator<Item = SubgroupId> {
        (0..self.subgroups.len()).map(SubgroupId)
    }

    pub fn subgroup_count(&self) -> usize {
        self.subgroups.len()
    }

    pub fn subgroup(&self, id: SubgroupId) -> &Subgroup {
        &self.subgroups[id.0]
    }

    pub fn trivial(&self) -> SubgroupId {
        SubgroupId(0)
    }

    pub fn whole(&self) -> SubgroupId {
        SubgroupId(self.subgroups.len() - 1)
    }

    pub fn subgroup_from_mask(&self, mask: u64) -> Option<SubgroupId> {
        self.by_mask.get(&mask).copied()
    }

    /// Subgroup generated by the given elements.
    pub fn generated_by(&self, gens: &[usize]) -> SubgroupId {
        let mask = gens.iter().fold(1u64, |m, &g| m | 1 << g);
        self.by_mask[&self.closure(mask)]
    }

    pub fn is_subgroup(&self, k: SubgroupId, h: SubgroupId) -> bool {
        self.subgroup(k).is_subgroup_of(self.subgroup(h))
    }

    pub fn index(&self, k: SubgroupId, h: SubgroupId) -> usize {
        debug_assert!(self.is_subgroup(k, h));
        self.subgroup(h).order() / self.subgroup(k).order()
    }

    /// `g H g^-1`.
    pub fn conjugate(&self, g: usize, h: SubgroupId) -> SubgroupId {
        self.conj[g * self.subgroups.len() + h.0]
    }

    /// `H ∩ g K g^-1`.
    pub fn conjugate_and_intersect(&self, h: SubgroupId, g: usize, k: SubgroupId) -> SubgroupId {
        let gk = self.conjugate(g, k);
        self.intersect(h, gk)
    }

    pub fn intersect(&self, a: SubgroupId, b: SubgroupId) -> SubgroupId {
        self.by_mask[&(self.subgroup(a).mask & self.subgroup(b).mask)]
    }

    /// The H-conjugacy classes of subgroups of H (the set 𝒪(H)).
    pub fn subgroup_classes(&self, h: SubgroupId) -> SubgroupClassSet {
        SubgroupClassSet { ambient: h, representatives: self.classes[h.0].clone() }
    }

    pub fn class_reps(&self, h: SubgroupId) -> &[SubgroupId] {
        &self.classes[h.0]
    }

    /// Position of the H-class of `k` in [`Self::class_reps`]`(h)`.
    pub fn class_index(&self, h: SubgroupId, k: SubgroupId) -> Option<usize> {
        self.class_index[h.0][k.0]
    }

    /// Canonical representative of the G-conjugacy class of `k`.
    pub fn class_rep_in_group(&self, k: SubgroupId) -> SubgroupId {
        let w = self.whole();
        self.classes[w.0][self.class_index(w, k).expect("subgroup of G")]
    }

    /// Left coset representatives of K in H (least element of each coset),
    /// sorted.
    pub fn left_cosets(&self, h: SubgroupId, k: SubgroupId) -> Vec<usize> {
        debug_assert!(self.is_subgroup(k, h));
        let ks = self.subgroup(k);
        let mut covered = 0u64;
        let mut reps = Vec::new();
        for &x in self.subgroup(h).members() {
            if covered >> x & 1 == 1 {
                continue;
            }
            reps.push(x);
            for &y in ks.members() {
                covered |= 1 << self.mul(x, y);
            }
        }
        reps
    }

    /// Representatives (least elements) of the double cosets `L x K` with
    /// `x` in `ambient`; `L`, `K` must be subgroups of `ambient`.
    pub fn double_cosets_within(&self, ambient: SubgroupId, l: SubgroupId, k: SubgroupId) -> Vec<usize> {
        let ls = self.subgroup(l);
        let ks = self.subgroup(k);
        let mut covered = 0u64;
        let mut reps = Vec::new();
        for &x in self.subgroup(ambient).members() {
            if covered >> x & 1 == 1 {
                continue;
            }
            reps.push(x);
            for &a in ls.members() {
                let ax = self.mul(a, x);
                for &b in ks.members() {
                    covered |= 1 << self.mul(ax, b);
                }
            }
        }
        reps
    }

    /// Representatives of the double cosets `H g K` in G.
    pub fn double_cosets(&self, h: SubgroupId, k: SubgroupId) -> Vec<usize> {
        self.double_cosets_within(self.whole(), h, k)
    }

    /// Sizes of the double cosets returned by [`Self::double_cosets`].
    pub fn double_coset_size(&self, h: SubgroupId, g: usize, k: SubgroupId) -> usize {
        let mut seen = 0u64;
        for &a in self.subgroup(h).members() {
            for &b in self.subgroup(k).members() {
                seen |= 1 << self.mul(self.mul(a, g), b);
            }
        }
        seen.count_ones() as usize
    }

    pub fn is_cyclic(&self, h: SubgroupId) -> bool {
        let s = self.subgroup(h);
        s.members().iter().any(|&g| self.element_order(g) == s.order())
    }

    fn is_abelian(&self, h: SubgroupId) -> bool {
        let m = self.subgroup(h).members();
        m.iter().all(|&a| m.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Isomorphism-type name of a subgroup, for display.
    pub fn iso_type_name(&self, h: SubgroupId) -> String {
        if h == self.whole() {
            return self.name.clone();
        }
        let s = self.subgroup(h);
        let n = s.order();
        if n == 1 {
            return "e".into();
        }
        if self.is_cyclic(h) {
            return format!("C{n}");
        }
        let involutions = s.members().iter().filter(|&&g| self.element_order(g) == 2).count();
        let abelian = self.is_abelian(h);
        match (n, abelian, involutions) {
            (4, _, _) => "C2xC2".into(),
            (6, _, _) => "S3".into(),
            (8, true, 7) => "C2xC2xC2".into(),
            (8, true, _) => "C4xC2".into(),
            (8, false, 5) => "D8".into(),
            (8, false, 1) => "Q8".into(),
            (12, true, _) => "C6xC2".into(),
            (12, false, 3) => "A4".into(),
            (12, false, 7) => "D12".into(),
            (12, false, 1) => "C3:C4".into(),
            (24, false, 9) => "S4".into(),
            _ => format!("H{n}"),
        }
    }

    /// Display names for the canonical class representatives of 𝒪(G),
    /// disambiguated with `#k` when two classes share an isomorphism type.
    pub fn class_names(&self) -> Vec<(SubgroupId, String)> {
        let reps = self.class_reps(self.whole()).to_vec();
        let names: Vec<String> = reps.iter().map(|&r| self.iso_type_name(r)).collect();
        let mut out = Vec::with_capacity(reps.len());
        for (i, (&r, name)) in reps.iter().zip(&names).enumerate() {
            let dup = names.iter().filter(|n| *n == name).count();
            if dup > 1 {
                let k = names[..=i].iter().filter(|n| *n == name).count();
                out.push((r, format!("{name}#{k}")));
            } else {
                out.push((r, name.clone()));
            }
        }
        out
    }

    pub fn class_name(&self, h: SubgroupId) -> String {
        let rep = self.class_rep_in_group(h);
        self.class_names().into_iter().find(|(r, _)| *r == rep).map(|(_, n)| n).expect("every subgroup has a class")
    }

    /// Resolves a level name `G/G`, `G/e`, `G/<class name>` or `G/#<index>`
    /// to a canonical class representative.
    pub fn resolve_level(&self, level: &str) -> Result<SubgroupId> {
        let level = level.trim();
        let tail = level.strip_prefix("G/").unwrap_or(level);
        if tail == "G" || tail == self.name {
            return Ok(self.whole());
        }
        if tail == "e" || tail == "1" {
            return Ok(self.trivial());
        }
        if let Some(idx) = tail.strip_prefix('#') {
            let i: usize = idx.parse().map_err(|_| Error::BadSpec(format!("bad class index {idx}")))?;
            return self.class_reps(self.whole()).get(i).copied().ok_or_else(|| Error::BadSpec(format!("no subgroup class #{i}")));
        }
        let names = self.class_names();
        let normalized = normalize_name(tail);
        names
            .iter()
            .find(|(_, n)| *n == normalized)
            .or_else(|| names.iter().find(|(_, n)| n.split('#').next() == Some(&normalized)))
            .map(|(r, _)| *r)
            .ok_or_else(|| {
                Error::BadSpec(format!(
                    "unknown level {level}; known: {}",
                    names.iter().map(|(_, n)| format!("G/{n}")).collect::<Vec<_>>().join(", ")
                ))
            })
    }
}

fn normalize_name(s: &str) -> String {
    s.trim().replace('×', "x").replace(' ', "")
}

type Perm = Vec<usize>;

fn compose(a: &Perm, b: &Perm) -> Perm {
    // (a∘b)(i) = a(b(i))
    b.iter().map(|&i| a[i]).collect()
}

fn perm_closure(gens: &[Perm], degree: usize) -> Vec<Perm> {
    let id: Perm = (0..degree).collect();
    let mut set: BTreeSet<Perm> = BTreeSet::new();
    set.insert(id.clone());
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = compose(g, &p);
            if set.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    set.into_iter().collect()
}

fn cycle_label(p: &Perm) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for i in 0..p.len() {
        if seen[i] || p[i] == i {
            continue;
        }
        let mut cyc = vec![i];
        seen[i] = true;
        let mut j = p[i];
        while j != i {
            seen[j] = true;
            cyc.push(j);
            j = p[j];
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

fn family_order(token: &str) -> Result<(char, usize)> {
    let bad = || Error::BadSpec(format!("unknown group family {token}"));
    let mut chars = token.chars();
    let kind = chars.next().ok_or_else(bad)?.to_ascii_uppercase();
    let n: usize = chars.as_str().parse().map_err(|_| bad())?;
    let order = match kind {
        'C' if n >= 1 => n,
        'D' if n >= 2 && n.is_multiple_of(2) => n,
        'S' if n >= 1 => (1..=n).product(),
        'A' if n >= 1 => ((1..=n).product::<usize>() / 2).max(1),
        _ => return Err(bad()),
    };
    Ok((kind, order))
}

fn family_gens(kind: char, n: usize) -> (usize, Vec<Perm>) {
    let cycle = |m: usize| -> Perm { (0..m).map(|i| (i + 1) % m).collect() };
    match kind {
        'C' => (n, vec![cycle(n)]),
        'D' => {
            let m = n / 2;
            if m <= 2 {
                // D2 = C2, D4 = C2xC2 acting regularly on 4 points
                if m == 1 {
                    (2, vec![vec![1, 0]])
                } else {
                    (4, vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
                }
            } else {
                let refl: Perm = (0..m).map(|i| (m - i) % m).collect();
                (m, vec![cycle(m), refl])
            }
        }
        'S' => {
            if n <= 1 {
                (1, vec![])
            } else {
                let mut t: Perm = (0..n).collect();
                t.swap(0, 1);
                (n, vec![cycle(n), t])
            }
        }
        'A' => {
            if n <= 2 {
                (1, vec![])
            } else {
                // 3-cycles (0 1 k) generate A_n
                let gens = (2..n)
                    .map(|k| {
                        let mut p: Perm = (0..n).collect();
                        p[0] = 1;
                        p[1] = k;
                        p[k] = 0;
                        p
                    })
                    .collect();
                (n, gens)
            }
        }
        _ => unreachable!(),
    }
}

fn named_family(name: &str, bound: usize) -> Result<(usize, Vec<Perm>, Vec<String>)> {
    let norm = normalize_name(name);
    let factors: Vec<&str> = norm.split(['x', 'X']).collect();
    let mut specs = Vec::new();
    let mut order = 1usize;
    for f in &factors {
        let (kind, o) = family_order(f)?;
        order = order.saturating_mul(o);
        specs.push((kind, f[1..].parse::<usize>().expect("checked")));
    }
    if order > bound {
        return Err(Error::OrderBoundExceeded { order, bound });
    }
    // direct product: factors act on disjoint blocks of points
    let mut offset = 0;
    let mut gens = Vec::new();
    let mut blocks = Vec::new();
    for &(kind, n) in &specs {
        let (deg, g) = family_gens(kind, n);
        blocks.push((offset, deg, g));
        offset += deg;
    }
    let degree = offset.max(1);
    for (off, deg, g) in blocks {
        for p in g {
            let mut q: Perm = (0..degree).collect();
            for i in 0..deg {
                q[off + i] = off + p[i];
            }
            gens.push(q);
        }
    }
    let perms = perm_closure(&gens, degree);
    if perms.len() != order {
        return Err(Error::BadSpec(format!("family {name} generated {} elements, expected {order}", perms.len())));
    }
    let labels = perms.iter().map(cycle_label).collect();
    Ok((order, perms, labels))
}

fn table_from_perms(perms: &[Perm]) -> Vec<usize> {
    let index: HashMap<&Perm, usize> = perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = perms.len();
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[a * n + b] = index[&compose(&perms[a], &perms[b])];
        }
    }
    table
}

fn validate_table(rows: &[Vec<usize>], bound: usize) -> Result<(Vec<usize>, Vec<String>)> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::BadSpec("empty table".into()));
    }
    if n > bound {
        return Err(Error::OrderBoundExceeded { order: n, bound });
    }
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::BadSpec(format!("row {i} has {} entries", r.len())));
        }
        if let Some(&bad) = r.iter().find(|&&x| x >= n) {
            return Err(Error::BadSpec(format!("entry {bad} out of range in row {i}")));
        }
    }
    let at = |a: usize, b: usize| rows[a][b];
    let e = (0..n).find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x)).ok_or(Error::MissingIdentity)?;
    for a in 0..n {
        if !(0..n).any(|b| at(a, b) == e && at(b, a) == e) {
            return Err(Error::MissingInverse(a));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(Error::NonAssociative(a, b, c));
                }
            }
        }
    }
    // relabel so that the identity is element 0
    let swap = |x: usize| {
        if x == e {
            0
        } else if x == 0 {
            e
        } else {
            x
        }
    };
    let mut table = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            table[swap(a) * n + swap(b)] = swap(at(a, b));
        }
    }
    let labels = (0..n).map(|i| format!("g{}", swap(i))).collect::<Vec<_>>();
    let mut ordered = vec![String::new(); n];
    for (i, l) in labels.into_iter().enumerate() {
        ordered[swap(i)] = l;
    }
    Ok((table, ordered))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> Arc<FiniteGroup> {
        FiniteGroup::parse(name).unwrap()
    }

    fn order_census(grp: &FiniteGroup) -> Vec<usize> {
        let mut c = vec![0; grp.order() + 1];
        for x in grp.elements() {
            c[grp.element_order(x)] += 1;
        }
        c
    }

    // brute force: every subset closed under products is a subgroup
    fn brute_subgroups(grp: &FiniteGroup) -> Vec<u64> {
        let n = grp.order();
        let mut out = Vec::new();
        for mask in 0u64..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let ok = (0..n)
                .filter(|a| mask >> a & 1 == 1)
                .all(|a| (0..n).filter(|b| mask >> b & 1 == 1).all(|b| mask >> grp.mul(a, b) & 1 == 1));
            if ok {
                out.push(mask);
            }
        }
        out
    }

    #[test]
    fn c2_has_one_involution() {
        let c2 = g("C2");
        assert_eq!(c2.order(), 2);
        assert_eq!(c2.identity(), 0);
        assert_eq!(c2.mul(1, 1), 0);
    }

    #[test]
    fn s3_order_census() {
        let s3 = g("S3");
        let c = order_census(&s3);
        assert_eq!((c[1], c[2], c[3]), (1, 3, 2));
    }

    #[test]
    fn families_have_expected_orders() {
        for (name, n) in [("C1", 1), ("C4", 4), ("C2xC2", 4), ("C2×C2", 4), ("D8", 8), ("D6", 6), ("A4", 12), ("S4", 24), ("C2xC3", 6)] {
            assert_eq!(g(name).order(), n, "{name}");
        }
        let d8 = g("D8");
        assert_eq!(order_census(&d8)[2], 5);
        assert!(g("C2xC3").is_cyclic(g("C2xC3").whole()));
    }

    #[test]
    fn order_bound_is_enforced() {
        let err = FiniteGroup::build_with_bound(&GroupSpec::Named("S5".into()), 24).unwrap_err();
        assert_eq!(err, Error::OrderBoundExceeded { order: 120, bound: 24 });
    }

    #[test]
    fn table_spec_validation() {
        let spec: GroupSpec = r#"{"order": 2, "table": [[0,1],[1,0]]}"#.parse().unwrap();
        assert_eq!(FiniteGroup::build(&spec).unwrap().order(), 2);

        // identity at index 1 gets relabelled to 0
        let spec: GroupSpec = r#"{"order": 2, "table": [[1,0],[0,1]]}"#.parse().unwrap();
        let grp = FiniteGroup::build(&spec).unwrap();
        assert_eq!(grp.mul(0, 1), 1);
        assert_eq!(grp.mul(1, 1), 0);

        // a loop with identity and inverses that is not associative
        let rows = vec![vec![0, 1, 2, 3, 4], vec![1, 0, 3, 4, 2], vec![2, 4, 0, 1, 3], vec![3, 2, 4, 0, 1], vec![4, 3, 1, 2, 0]];
        let err = FiniteGroup::build(&GroupSpec::Table(rows)).unwrap_err();
        assert!(matches!(err, Error::NonAssociative(..)), "{err:?}");

        let rows = vec![vec![0, 1], vec![1, 1]];
        assert_eq!(FiniteGroup::build(&GroupSpec::Table(rows)).unwrap_err(), Error::MissingInverse(1));
        assert!(matches!("C7x".parse::<GroupSpec>().and_then(|s| FiniteGroup::build(&s)), Err(Error::BadSpec(_))));
    }

    #[test]
    fn subgroup_lattice_matches_brute_force() {
        for name in ["C2", "C4", "C2xC2", "S3", "D8", "C6", "A4", "D12"] {
            let grp = g(name);
            let mut brute = brute_subgroups(&grp);
            brute.sort();
            let mut ours: Vec<u64> = grp.subgroups().map(|s| grp.subgroup(s).mask()).collect();
            ours.sort();
            assert_eq!(ours, brute, "{name}");
        }
    }

    #[test]
    fn subgroup_class_counts() {
        let count = |name: &str| {
            let grp = g(name);
            grp.subgroup_classes(grp.whole()).representatives.len()
        };
        assert_eq!(count("C2"), 2);
        assert_eq!(count("S3"), 4);
        assert_eq!(count("C2xC2"), 5);
        assert_eq!(count("D8"), 8);
        assert_eq!(count("A4"), 5);
        assert_eq!(count("S4"), 11);
    }

    #[test]
    fn class_sizes_sum_to_subgroup_count() {
        for name in ["S3", "D8", "A4", "C2xC2", "D12"] {
            let grp = g(name);
            for h in grp.subgroups() {
                let reps = grp.class_reps(h);
                let mut total = 0;
                for &r in reps {
                    let class: BTreeSet<SubgroupId> = grp.subgroup(h).members().iter().map(|&x| grp.conjugate(x, r)).collect();
                    total += class.len();
                }
                let subs = grp.subgroups().filter(|&k| grp.is_subgroup(k, h)).count();
                assert_eq!(total, subs, "{name}");
                // representatives are pairwise non-conjugate in H
                for (i, &a) in reps.iter().enumerate() {
                    for &b in &reps[i + 1..] {
                        assert!(grp.subgroup(h).members().iter().all(|&x| grp.conjugate(x, a) != b));
                    }
                }
            }
        }
    }

    #[test]
    fn double_coset_examples() {
        let c4 = g("C4");
        let c2 = c4.subgroups().find(|&s| c4.subgroup(s).order() == 2).unwrap();
        assert_eq!(c4.double_cosets(c2, c2).len(), 2);
        assert_eq!(c4.double_cosets(c4.whole(), c2).len(), 1);

        let s3 = g("S3");
        let t = s3.subgroups().find(|&s| s3.subgroup(s).order() == 2).unwrap();
        assert_eq!(s3.double_cosets(t, t).len(), 2);
    }

    #[test]
    fn double_coset_sizes_sum_to_order() {
        for name in ["S3", "D8", "A4"] {
            let grp = g(name);
            for h in grp.subgroups() {
                for k in grp.subgroups() {
                    let total: usize = grp.double_cosets(h, k).into_iter().map(|x| grp.double_coset_size(h, x, k)).sum();
                    assert_eq!(total, grp.order());
                }
            }
        }
    }

    #[test]
    fn conjugate_and_intersect_examples() {
        let s3 = g("S3");
        let twos: Vec<SubgroupId> = s3.subgroups().filter(|&s| s3.subgroup(s).order() == 2).collect();
        assert_eq!(s3.conjugate_and_intersect(twos[0], 0, twos[0]), twos[0]);
        assert_eq!(s3.conjugate_and_intersect(twos[0], 0, twos[1]), s3.trivial());
        assert_eq!(s3.conjugate_and_intersect(twos[1], 3, s3.whole()), twos[1]);
    }

    #[test]
    fn canonical_order_is_stable() {
        let a = g("S3");
        let b = g("S3");
        let names_a: Vec<_> = a.class_names().into_iter().map(|x| x.1).collect();
        let names_b: Vec<_> = b.class_names().into_iter().map(|x| x.1).collect();
        assert_eq!(names_a, names_b);
        assert_eq!(names_a, vec!["e", "C2", "C3", "S3"]);
        let k = g("C2xC2");
        let names: Vec<_> = k.class_names().into_iter().map(|x| x.1).collect();
        assert_eq!(names, vec!["e", "C2#1", "C2#2", "C2#3", "C2xC2"]);
        assert_eq!(k.resolve_level("G/C2#2").unwrap(), k.class_reps(k.whole())[2]);
        assert_eq!(a.resolve_level("G/S3").unwrap(), a.whole());
        assert_eq!(a.resolve_level("G/G").unwrap(), a.whole());
        assert_eq!(a.resolve_level("G/e").unwrap(), a.trivial());
        assert!(a.resolve_level("G/Q8").is_err());
    }
}
