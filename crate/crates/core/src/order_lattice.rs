//! Finite posets, upper sets, finite lattices, Birkhoff's representation and
//! free distributive lattices in antichain normal form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_POSET: usize = 64;
pub const MAX_UPPER_SET_POSET: usize = 20;
pub const MAX_ENUMERATE_GENERATORS: usize = 5;
pub const MAX_TABLE_GENERATORS: usize = 4;
const MAX_ANTICHAIN_GENERATORS: usize = 16;
const MAX_CLOSURE: usize = 20_000;

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&i| mask >> i & 1 == 1)
}

/// Finite partial order on `0..len`, stored as up-set bitmasks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poset {
    labels: Vec<String>,
    up: Vec<u64>,
}

impl Poset {
    /// Builds a poset from a full relation matrix, checking the axioms.
    pub fn new(labels: Vec<String>, leq: &[Vec<bool>]) -> Result<Self> {
        let n = labels.len();
        if n > MAX_POSET {
            return Err(Error::SizeLimit { what: "poset size", value: n, limit: MAX_POSET });
        }
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPoset(format!("relation matrix is not {n}×{n}")));
        }
        let up: Vec<u64> = leq
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &b)| b).fold(0u64, |m, (j, _)| m | 1 << j))
            .collect();
        for a in 0..n {
            if up[a] >> a & 1 == 0 {
                return Err(Error::InvalidPoset(format!("{} ≰ {}", labels[a], labels[a])));
            }
            for b in bits(up[a]) {
                if b != a && up[b] >> a & 1 == 1 {
                    return Err(Error::InvalidPoset(format!("{} and {} are mutually ≤", labels[a], labels[b])));
                }
                if up[b] & !up[a] != 0 {
                    return Err(Error::InvalidPoset(format!("not transitive through {}", labels[b])));
                }
            }
        }
        Ok(Poset { labels, up })
    }

    /// Reflexive-transitive closure of the pairs `a ≤ b`.
    pub fn from_relation(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_POSET {
            return Err(Error::SizeLimit { what: "poset size", value: n, limit: MAX_POSET });
        }
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!("pair ({a},{b}) out of range")));
            }
            up[a] |= 1 << b;
        }
        loop {
            let mut changed = false;
            for a in 0..n {
                let mut m = up[a];
                for b in bits(up[a]) {
                    m |= up[b];
                }
                if m != up[a] {
                    up[a] = m;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let leq: Vec<Vec<bool>> = (0..n).map(|a| (0..n).map(|b| up[a] >> b & 1 == 1).collect()).collect();
        Poset::new((0..n).map(|i| i.to_string()).collect(), &leq)
    }

    pub fn antichain(n: usize) -> Result<Self> {
        Poset::from_relation(n, &[])
    }

    pub fn chain(n: usize) -> Result<Self> {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relation(n, &pairs)
    }

    /// Subsets of `{0..n−1}` ordered by inclusion; `proper` drops the full
    /// set. The empty set is never included.
    pub fn subsets(n: usize, proper: bool) -> Result<Self> {
        let full = (1u64 << n) - 1;
        let masks: Vec<u64> = (1..=full).filter(|&m| !(proper && m == full)).collect();
        let leq: Vec<Vec<bool>> = masks.iter().map(|&a| masks.iter().map(|&b| a & !b == 0).collect()).collect();
        Poset::new(masks.iter().map(|&m| mask_label(m)).collect(), &leq)
    }

    /// Random poset: each pair `a < b` is related with probability `p`
    /// before closing transitively.
    pub fn random<R: Rng>(rng: &mut R, n: usize, p: f64) -> Result<Self> {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(p) {
                    pairs.push((a, b));
                }
            }
        }
        Poset::from_relation(n, &pairs)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a] >> b & 1 == 1
    }

    /// `↑a` as a bitmask.
    pub fn up_mask(&self, a: usize) -> u64 {
        self.up[a]
    }

    /// `↓a` as a bitmask.
    pub fn down_mask(&self, a: usize) -> u64 {
        (0..self.len()).filter(|&b| self.leq(b, a)).fold(0, |m, b| m | 1 << b)
    }

    pub fn opposite(&self) -> Poset {
        let n = self.len();
        let up = (0..n).map(|a| self.down_mask(a)).collect();
        Poset { labels: self.labels.clone(), up }
    }

    /// Covering pairs `(a, b)`, `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            let strict = self.up[a] & !(1 << a);
            for b in bits(strict) {
                let between = strict & self.down_mask(b) & !(1 << b);
                if between == 0 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_upper_set(&self, members: u64) -> bool {
        bits(members).all(|a| self.up[a] & !members == 0)
    }

    /// An order isomorphism `self → other`, if one exists.
    pub fn isomorphism(&self, other: &Poset) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() {
            return None;
        }
        let sig = |p: &Poset, a: usize| (p.up[a].count_ones(), p.down_mask(a).count_ones());
        let mut sa: Vec<_> = (0..n).map(|a| sig(self, a)).collect();
        let mut sb: Vec<_> = (0..n).map(|a| sig(other, a)).collect();
        let (sig_a, sig_b) = (sa.clone(), sb.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        let mut map = vec![usize::MAX; n];
        let mut used = 0u64;
        fn go(
            a: usize,
            p: &Poset,
            q: &Poset,
            sig_a: &[(u32, u32)],
            sig_b: &[(u32, u32)],
            map: &mut Vec<usize>,
            used: &mut u64,
        ) -> bool {
            if a == p.len() {
                return true;
            }
            for b in 0..q.len() {
                if *used >> b & 1 == 1 || sig_a[a] != sig_b[b] {
                    continue;
                }
                let consistent = (0..a).all(|c| {
                    p.leq(c, a) == q.leq(map[c], b) && p.leq(a, c) == q.leq(b, map[c])
                });
                if !consistent {
                    continue;
                }
                map[a] = b;
                *used |= 1 << b;
                if go(a + 1, p, q, sig_a, sig_b, map, used) {
                    return true;
                }
                *used &= !(1 << b);
            }
            false
        }
        go(0, self, other, &sig_a, &sig_b, &mut map, &mut used).then_some(map)
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.isomorphism(other).is_some()
    }

    pub fn to_dot(&self, name: &str) -> String {
        hasse_dot(name, &self.labels, &self.covers())
    }
}

fn mask_label(m: u64) -> String {
    let items: Vec<String> = bits(m).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

fn hasse_dot(name: &str, labels: &[String], covers: &[(usize, usize)]) -> String {
    let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for (i, l) in labels.iter().enumerate() {
        s.push_str(&format!("  n{i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
    }
    for (a, b) in covers {
        s.push_str(&format!("  n{a} -> n{b};\n"));
    }
    s.push_str("}\n");
    s
}

/// Upward closed subset of a poset.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct UpperSet {
    members: u64,
}

impl UpperSet {
    pub fn members(&self) -> u64 {
        self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members >> a & 1 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bits(self.members)
    }

    pub fn len(&self) -> usize {
        self.members.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    pub fn label(&self, p: &Poset) -> String {
        let items: Vec<&str> = self.iter().map(|a| p.labels()[a].as_str()).collect();
        format!("{{{}}}", items.join(","))
    }
}

/// Every upper set of `p`, sorted by member mask.
pub fn upper_sets(p: &Poset) -> Result<Vec<UpperSet>> {
    let n = p.len();
    if n > MAX_UPPER_SET_POSET {
        return Err(Error::SizeLimit { what: "poset size for upper-set enumeration", value: n, limit: MAX_UPPER_SET_POSET });
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let down: Vec<u64> = (0..n).map(|a| p.down_mask(a)).collect();
    let mut out = Vec::new();
    // Each branch decides the lowest undecided element, forcing its up-set
    // in or its down-set out, so every leaf is a distinct upper set.
    fn go(inc: u64, exc: u64, all: u64, p: &Poset, down: &[u64], out: &mut Vec<UpperSet>) {
        let undecided = all & !inc & !exc;
        if undecided == 0 {
            out.push(UpperSet { members: inc });
            return;
        }
        let a = undecided.trailing_zeros() as usize;
        go(inc | p.up_mask(a), exc, all, p, down, out);
        go(inc, exc | down[a], all, p, down, out);
    }
    go(0, 0, all, p, &down, &mut out);
    out.sort_unstable();
    Ok(out)
}

/// Finite lattice given by validated join and meet tables over `0..len`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteLattice {
    labels: Vec<String>,
    join: Vec<Vec<u32>>,
    meet: Vec<Vec<u32>>,
}

impl FiniteLattice {
    /// Validates the lattice axioms: closure, commutativity, idempotence,
    /// associativity and absorption.
    pub fn new(labels: Vec<String>, join: Vec<Vec<u32>>, meet: Vec<Vec<u32>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidLattice("empty lattice".into()));
        }
        for (name, t) in [("join", &join), ("meet", &meet)] {
            if t.len() != n || t.iter().any(|r| r.len() != n || r.iter().any(|&v| v as usize >= n)) {
                return Err(Error::InvalidLattice(format!("{name} table is not a closed {n}×{n} table")));
            }
        }
        let l = FiniteLattice { labels, join, meet };
        for a in 0..n {
            if l.j(a, a) != a || l.m(a, a) != a {
                return Err(Error::InvalidLattice(format!("not idempotent at {}", l.labels[a])));
            }
            for b in 0..n {
                if l.j(a, b) != l.j(b, a) || l.m(a, b) != l.m(b, a) {
                    return Err(Error::InvalidLattice(format!("not commutative at ({},{})", l.labels[a], l.labels[b])));
                }
                if l.j(a, l.m(a, b)) != a || l.m(a, l.j(a, b)) != a {
                    return Err(Error::InvalidLattice(format!("absorption fails at ({},{})", l.labels[a], l.labels[b])));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let (ab_j, ab_m) = (l.j(a, b), l.m(a, b));
                for c in 0..n {
                    if l.j(ab_j, c) != l.j(a, l.j(b, c)) || l.m(ab_m, c) != l.m(a, l.m(b, c)) {
                        return Err(Error::InvalidLattice(format!(
                            "not associative at ({},{},{})",
                            l.labels[a], l.labels[b], l.labels[c]
                        )));
                    }
                }
            }
        }
        Ok(l)
    }

    /// Rebuilds tables from a list of elements closed under `join`/`meet`
    /// and an equality-compatible key.
    pub fn from_elements<E, K: std::hash::Hash + Eq>(
        elements: &[E],
        key: impl Fn(&E) -> K,
        label: impl Fn(&E) -> String,
        join: impl Fn(&E, &E) -> E,
        meet: impl Fn(&E, &E) -> E,
    ) -> Result<Self> {
        let index: HashMap<K, u32> = elements.iter().enumerate().map(|(i, e)| (key(e), i as u32)).collect();
        let n = elements.len();
        let lookup = |e: &E, what: &str| {
            index
                .get(&key(e))
                .copied()
                .ok_or_else(|| Error::InvalidLattice(format!("{what} of {} leaves the element list", label(e))))
        };
        let mut jt = vec![vec![0u32; n]; n];
        let mut mt = vec![vec![0u32; n]; n];
        for a in 0..n {
            for b in a..n {
                let j = lookup(&join(&elements[a], &elements[b]), "join")?;
                let m = lookup(&meet(&elements[a], &elements[b]), "meet")?;
                jt[a][b] = j;
                jt[b][a] = j;
                mt[a][b] = m;
                mt[b][a] = m;
            }
        }
        FiniteLattice::new(elements.iter().map(label).collect(), jt, mt)
    }

    fn j(&self, a: usize, b: usize) -> usize {
        self.join[a][b] as usize
    }

    fn m(&self, a: usize, b: usize) -> usize {
        self.meet[a][b] as usize
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.j(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.m(a, b)
    }

    pub fn join_table(&self) -> &[Vec<u32>] {
        &self.join
    }

    pub fn meet_table(&self) -> &[Vec<u32>] {
        &self.meet
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.m(a, b) == a
    }

    pub fn top(&self) -> usize {
        (0..self.len()).fold(0, |acc, a| self.j(acc, a))
    }

    pub fn bottom(&self) -> usize {
        (0..self.len()).fold(0, |acc, a| self.m(acc, a))
    }

    pub fn opposite(&self) -> FiniteLattice {
        FiniteLattice { labels: self.labels.clone(), join: self.meet.clone(), meet: self.join.clone() }
    }

    /// First triple violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`, if any.
    pub fn distributivity_violation(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in b..n {
                    if self.m(a, self.j(b, c)) != self.j(self.m(a, b), self.m(a, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn is_distributive(&self) -> bool {
        self.distributivity_violation().is_none()
    }

    /// Elements `c` with `c = a ∧ b ⇒ c ∈ {a, b}` that are not the top.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        let n = self.len();
        let mut reducible = vec![false; n];
        for a in 0..n {
            for b in a + 1..n {
                let c = self.m(a, b);
                if c != a && c != b {
                    reducible[c] = true;
                }
            }
        }
        reducible[self.top()] = true;
        (0..n).filter(|&c| !reducible[c]).collect()
    }

    /// A pair `(a, b)` with `c = a ∧ b` and `c ∉ {a, b}`.
    pub fn meet_decomposition(&self, c: usize) -> Option<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.m(a, b) == c && c != a && c != b)
    }

    pub fn join_irreducibles(&self) -> Vec<usize> {
        self.opposite().meet_irreducibles()
    }

    /// Poset on a subset of the elements with the lattice order.
    pub fn subposet(&self, elements: &[usize]) -> Result<Poset> {
        let leq: Vec<Vec<bool>> =
            elements.iter().map(|&a| elements.iter().map(|&b| self.leq(a, b)).collect()).collect();
        Poset::new(elements.iter().map(|&a| self.labels[a].clone()).collect(), &leq)
    }

    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq(a, b) {
                    continue;
                }
                let between = (0..n).any(|c| c != a && c != b && self.leq(a, c) && self.leq(c, b));
                if !between {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn to_dot(&self, name: &str) -> String {
        hasse_dot(name, &self.labels, &self.covers())
    }

    /// `{elements, join, meet}` with tables of element indices.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "elements": self.labels,
            "join": self.join,
            "meet": self.meet,
        })
    }
}

/// Lattice of upper sets of `p` with `∩` as join and `∪` as meet, so that
/// `U ≤ V` iff `U ⊇ V`. Element `k` is the `k`-th entry of [`upper_sets`].
pub fn upper_set_lattice(p: &Poset) -> Result<(Vec<UpperSet>, FiniteLattice)> {
    let sets = upper_sets(p)?;
    let lattice = FiniteLattice::from_elements(
        &sets,
        |u| u.members,
        |u| u.label(p),
        |a, b| UpperSet { members: a.members & b.members },
        |a, b| UpperSet { members: a.members | b.members },
    )?;
    Ok((sets, lattice))
}

/// Birkhoff transform: the poset of meet irreducibles and, for each element
/// `a`, the upper set `{x ∈ Mirred | x ≥ a}` of that poset.
pub fn birkhoff_transform(l: &FiniteLattice) -> Result<(Poset, Vec<UpperSet>)> {
    let irr = l.meet_irreducibles();
    if irr.len() > MAX_UPPER_SET_POSET {
        return Err(Error::SizeLimit { what: "meet irreducibles", value: irr.len(), limit: MAX_UPPER_SET_POSET });
    }
    let poset = l.subposet(&irr)?;
    let image: Vec<UpperSet> = (0..l.len())
        .map(|a| UpperSet {
            members: irr.iter().enumerate().filter(|(_, &x)| l.leq(a, x)).fold(0, |m, (k, _)| m | 1 << k),
        })
        .collect();
    let mut seen: BTreeMap<u64, usize> = BTreeMap::new();
    for (a, u) in image.iter().enumerate() {
        if let Some(&b) = seen.get(&u.members) {
            return Err(Error::NotDistributive(format!(
                "{} and {} have the same meet irreducibles above them",
                l.labels[b], l.labels[a]
            )));
        }
        seen.insert(u.members, a);
    }
    let targets = upper_sets(&poset)?;
    if targets.len() != image.len() {
        return Err(Error::NotDistributive(format!(
            "{} elements but {} upper sets of meet irreducibles",
            image.len(),
            targets.len()
        )));
    }
    for a in 0..l.len() {
        for b in 0..l.len() {
            let meet_ok = image[l.meet(a, b)].members == image[a].members | image[b].members;
            let join_ok = image[l.join(a, b)].members == image[a].members & image[b].members;
            if !meet_ok || !join_ok {
                return Err(Error::NotDistributive(format!(
                    "transform does not preserve operations at ({},{})",
                    l.labels[a], l.labels[b]
                )));
            }
        }
    }
    Ok((poset, image))
}

/// Element `⋁_{a∈antichain} ⋀_{i∈a} λ_i` of the free distributive lattice on
/// `n_generators` generators, stored as the sorted antichain of minimal
/// index sets (bitmasks).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct AntichainForm {
    n_generators: usize,
    antichain: Vec<u32>,
}

fn check_generators(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ANTICHAIN_GENERATORS {
        return Err(Error::SizeLimit { what: "generator count", value: n, limit: MAX_ANTICHAIN_GENERATORS });
    }
    Ok(())
}

/// Minimal members of a family of sets, sorted.
pub fn minimal_sets(mut family: Vec<u32>) -> Vec<u32> {
    family.sort_unstable_by_key(|m| (m.count_ones(), *m));
    family.dedup();
    let mut out: Vec<u32> = Vec::new();
    for m in family {
        if !out.iter().any(|&a| a & !m == 0) {
            out.push(m);
        }
    }
    out.sort_unstable();
    out
}

impl AntichainForm {
    /// Validates an antichain given as bitmasks.
    pub fn new(n_generators: usize, sets: &[u32]) -> Result<Self> {
        check_generators(n_generators)?;
        let full = (1u32 << n_generators) - 1;
        if sets.is_empty() {
            return Err(Error::InvalidAntichain("empty antichain".into()));
        }
        for (i, &a) in sets.iter().enumerate() {
            if a == 0 || a & !full != 0 {
                return Err(Error::InvalidAntichain(format!("member {a:#b} is empty or out of range")));
            }
            for &b in &sets[i + 1..] {
                if a & !b == 0 || b & !a == 0 {
                    return Err(Error::InvalidAntichain(format!("{} and {} are comparable", mask_label(a.into()), mask_label(b.into()))));
                }
            }
        }
        let mut antichain = sets.to_vec();
        antichain.sort_unstable();
        Ok(AntichainForm { n_generators, antichain })
    }

    /// Element generated by an arbitrary non-empty family of non-empty sets.
    pub fn from_family(n_generators: usize, family: &[u32]) -> Result<Self> {
        AntichainForm::new(n_generators, &minimal_sets(family.to_vec()))
    }

    pub fn from_index_sets(n_generators: usize, sets: &[Vec<usize>]) -> Result<Self> {
        let masks: Vec<u32> = sets.iter().map(|s| s.iter().fold(0u32, |m, &i| m | 1 << i)).collect();
        if sets.iter().flatten().any(|&i| i >= n_generators) {
            return Err(Error::InvalidAntichain("index out of range".into()));
        }
        AntichainForm::new(n_generators, &masks)
    }

    /// `λ_i`.
    pub fn generator(n_generators: usize, i: usize) -> Result<Self> {
        if i >= n_generators {
            return Err(Error::InvalidAntichain(format!("generator {i} out of range")));
        }
        AntichainForm::new(n_generators, &[1 << i])
    }

    /// `⋁_{i∈I} λ_i` for a non-empty mask `I`.
    pub fn join_of_generators(n_generators: usize, mask: u32) -> Result<Self> {
        let sets: Vec<u32> = (0..n_generators).filter(|&i| mask >> i & 1 == 1).map(|i| 1 << i).collect();
        AntichainForm::new(n_generators, &sets)
    }

    pub fn n_generators(&self) -> usize {
        self.n_generators
    }

    pub fn antichain(&self) -> &[u32] {
        &self.antichain
    }

    pub fn index_sets(&self) -> Vec<Vec<usize>> {
        self.antichain
            .iter()
            .map(|&m| (0..self.n_generators).filter(|&i| m >> i & 1 == 1).collect())
            .collect()
    }

    /// Full upper set of non-empty subsets generated by the antichain.
    pub fn upper_set_family(&self) -> Vec<u32> {
        let full = (1u32 << self.n_generators) - 1;
        (1..=full).filter(|&s| self.antichain.iter().any(|&a| a & !s == 0)).collect()
    }
}

impl fmt::Display for AntichainForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .index_sets()
            .iter()
            .map(|s| {
                let m: Vec<String> = s.iter().map(|i| format!("λ{i}")).collect();
                if m.len() > 1 && self.antichain.len() > 1 {
                    format!("({})", m.join("∧"))
                } else {
                    m.join("∧")
                }
            })
            .collect();
        f.write_str(&parts.join(" ∨ "))
    }
}

fn same_generators(x: &AntichainForm, y: &AntichainForm) -> Result<()> {
    if x.n_generators != y.n_generators {
        return Err(Error::GeneratorMismatch(x.n_generators, y.n_generators));
    }
    Ok(())
}

pub fn fdl_join(x: &AntichainForm, y: &AntichainForm) -> Result<AntichainForm> {
    same_generators(x, y)?;
    let family = x.antichain.iter().chain(&y.antichain).copied().collect();
    Ok(AntichainForm { n_generators: x.n_generators, antichain: minimal_sets(family) })
}

pub fn fdl_meet(x: &AntichainForm, y: &AntichainForm) -> Result<AntichainForm> {
    same_generators(x, y)?;
    let family = x.antichain.iter().flat_map(|&a| y.antichain.iter().map(move |&b| a | b)).collect();
    Ok(AntichainForm { n_generators: x.n_generators, antichain: minimal_sets(family) })
}

/// `x ≤ y`, i.e. the upper set of `x` is contained in that of `y`.
pub fn fdl_leq(x: &AntichainForm, y: &AntichainForm) -> Result<bool> {
    same_generators(x, y)?;
    Ok(x.antichain.iter().all(|&a| y.antichain.iter().any(|&b| b & !a == 0)))
}

/// Every element of the free distributive lattice on `n` generators, sorted.
pub fn fdl_enumerate(n: usize) -> Result<Vec<AntichainForm>> {
    if n == 0 || n > MAX_ENUMERATE_GENERATORS {
        return Err(Error::SizeLimit { what: "generator count for enumeration", value: n, limit: MAX_ENUMERATE_GENERATORS });
    }
    let full = (1u32 << n) - 1;
    let mut order: Vec<u32> = (1..=full).collect();
    order.sort_unstable_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
    // Family bitset over subsets: bit s stands for the subset with mask s.
    let below: Vec<u64> = (0..=full)
        .map(|t| (1..=full).filter(|&s| s & !t == 0).fold(0u64, |m, s| m | 1 << s))
        .collect();
    let mut out = Vec::new();
    // Subsets are visited by decreasing size, so a candidate can only clash
    // with an already chosen superset; those are tracked in `blocked`.
    fn go(pos: usize, order: &[u32], below: &[u64], blocked: u64, chosen: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos == order.len() {
            if !chosen.is_empty() {
                let mut a = chosen.clone();
                a.sort_unstable();
                out.push(a);
            }
            return;
        }
        let s = order[pos];
        if blocked >> s & 1 == 0 {
            chosen.push(s);
            go(pos + 1, order, below, blocked | below[s as usize], chosen, out);
            chosen.pop();
        }
        go(pos + 1, order, below, blocked, chosen, out);
    }
    let mut raw = Vec::new();
    go(0, &order, &below, 0, &mut Vec::new(), &mut raw);
    raw.sort_unstable();
    out.extend(raw.into_iter().map(|antichain| AntichainForm { n_generators: n, antichain }));
    Ok(out)
}

/// The free distributive lattice on `n ≤ 4` generators with explicit tables;
/// element `k` is the `k`-th entry of [`fdl_enumerate`].
pub fn free_lattice(n: usize) -> Result<(Vec<AntichainForm>, FiniteLattice)> {
    if n > MAX_TABLE_GENERATORS {
        return Err(Error::SizeLimit { what: "generator count for lattice tables", value: n, limit: MAX_TABLE_GENERATORS });
    }
    let elems = fdl_enumerate(n)?;
    let lattice = FiniteLattice::from_elements(
        &elems,
        |e| e.antichain.clone(),
        |e| e.to_string(),
        |a, b| fdl_join(a, b).expect("same generator count"),
        |a, b| fdl_meet(a, b).expect("same generator count"),
    )?;
    Ok((elems, lattice))
}

/// Externally represented lattice, queried through callbacks.
pub trait LatticeOracle {
    type Elem: Clone + fmt::Debug;

    fn generators(&self) -> Vec<Self::Elem>;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool>;

    fn equal(&self, a: &Self::Elem, b: &Self::Elem) -> Result<bool> {
        Ok(self.leq(a, b)? && self.leq(b, a)?)
    }

    fn describe(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Free,
    NotFree { witnesses: Vec<String> },
    Inconsistent { detail: String },
}

impl Verdict {
    pub fn is_free(&self) -> bool {
        matches!(self, Verdict::Free)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Free => f.write_str("FREE"),
            Verdict::NotFree { witnesses } => write!(f, "NOT FREE: {}", witnesses.first().map_or("", |s| s.as_str())),
            Verdict::Inconsistent { detail } => write!(f, "INCONSISTENT: {detail}"),
        }
    }
}

/// Outcome of [`check_freeness_criterion`]: the verdict, the generated
/// sublattice and the index of `⋁_{i∈I} λ_i` for each non-empty mask `I`.
#[derive(Clone, Debug)]
pub struct FreenessCheck<E> {
    pub verdict: Verdict,
    pub elements: Vec<E>,
    pub lattice: Option<FiniteLattice>,
    pub generator_joins: BTreeMap<u32, usize>,
}

fn find_or_insert<O: LatticeOracle>(oracle: &O, elems: &mut Vec<O::Elem>, e: O::Elem) -> Result<usize> {
    for (i, x) in elems.iter().enumerate() {
        if oracle.equal(x, &e)? {
            return Ok(i);
        }
    }
    if elems.len() >= MAX_CLOSURE {
        return Err(Error::SizeLimit { what: "generated lattice", value: elems.len() + 1, limit: MAX_CLOSURE });
    }
    elems.push(e);
    Ok(elems.len() - 1)
}

/// Decides whether the generators of `oracle` generate a free distributive
/// lattice: all joins `⋁_{i∈I} λ_i` for `∅ ≠ I ⊊ {0..N}` must be meet
/// irreducible in the generated sublattice and ordered exactly by `I ⊆ J`.
pub fn check_freeness_criterion<O: LatticeOracle>(oracle: &O) -> Result<FreenessCheck<O::Elem>> {
    let gens = oracle.generators();
    let n = gens.len();
    check_generators(n)?;
    let mut elems: Vec<O::Elem> = Vec::new();
    let mut gen_idx = Vec::with_capacity(n);
    for g in gens {
        gen_idx.push(find_or_insert(oracle, &mut elems, g)?);
    }
    let mut join_map: HashMap<(usize, usize), usize> = HashMap::new();
    let mut meet_map: HashMap<(usize, usize), usize> = HashMap::new();
    let mut a = 0;
    while a < elems.len() {
        for b in 0..=a {
            let j = oracle.join(&elems[a], &elems[b]);
            let m = oracle.meet(&elems[a], &elems[b]);
            let j = find_or_insert(oracle, &mut elems, j)?;
            let m = find_or_insert(oracle, &mut elems, m)?;
            join_map.insert((a, b), j);
            meet_map.insert((a, b), m);
        }
        a += 1;
    }
    let size = elems.len();
    let table = |map: &HashMap<(usize, usize), usize>| -> Vec<Vec<u32>> {
        (0..size)
            .map(|a| (0..size).map(|b| map[&(a.max(b), a.min(b))] as u32).collect())
            .collect()
    };
    let labels: Vec<String> = elems.iter().map(|e| oracle.describe(e)).collect();
    let mut generator_joins = BTreeMap::new();
    let inconsistent = |detail: String, elements: Vec<O::Elem>, lattice: Option<FiniteLattice>| FreenessCheck {
        verdict: Verdict::Inconsistent { detail },
        elements,
        lattice,
        generator_joins: BTreeMap::new(),
    };
    let lattice = match FiniteLattice::new(labels.clone(), table(&join_map), table(&meet_map)) {
        Ok(l) => l,
        Err(e) => return Ok(inconsistent(e.to_string(), elems, None)),
    };
    for a in 0..size {
        for b in 0..size {
            if oracle.leq(&elems[a], &elems[b])? != lattice.leq(a, b) {
                let detail = format!("order callback disagrees with meet at ({}, {})", labels[a], labels[b]);
                return Ok(inconsistent(detail, elems, Some(lattice)));
            }
        }
    }
    if let Some((a, b, c)) = lattice.distributivity_violation() {
        let detail = format!("distributivity fails at ({}, {}, {})", labels[a], labels[b], labels[c]);
        return Ok(inconsistent(detail, elems, Some(lattice)));
    }
    let full = (1u32 << n) - 1;
    for mask in 1..=full {
        let idx = (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| gen_idx[i])
            .reduce(|x, y| lattice.join(x, y))
            .expect("non-empty mask");
        generator_joins.insert(mask, idx);
    }
    let mut witnesses = Vec::new();
    for (&i, &a) in &generator_joins {
        for (&j, &b) in &generator_joins {
            if i == full || j == full {
                continue;
            }
            let expected = i & !j == 0;
            if lattice.leq(a, b) != expected {
                let rel = if expected { "≰" } else { "≤" };
                let sub = if expected { "⊆" } else { "⊄" };
                witnesses.push(format!(
                    "⋁{} = {} {rel} ⋁{} = {} although {} {sub} {}",
                    mask_label(i.into()),
                    labels[a],
                    mask_label(j.into()),
                    labels[b],
                    mask_label(i.into()),
                    mask_label(j.into())
                ));
            }
        }
    }
    let irreducible = lattice.meet_irreducibles();
    for (&i, &c) in &generator_joins {
        if i == full || irreducible.contains(&c) {
            continue;
        }
        let why = match lattice.meet_decomposition(c) {
            Some((a, b)) => format!("= {} ∧ {}", labels[a], labels[b]),
            None => "is the top element".to_string(),
        };
        witnesses.push(format!("⋁{} = {} is not meet irreducible: it {why}", mask_label(i.into()), labels[c]));
    }
    let verdict = if witnesses.is_empty() { Verdict::Free } else { Verdict::NotFree { witnesses } };
    Ok(FreenessCheck { verdict, elements: elems, lattice: Some(lattice), generator_joins })
}

/// The antichain model as an oracle.
#[derive(Clone, Copy, Debug)]
pub struct FreeLatticeOracle {
    pub n_generators: usize,
}

impl LatticeOracle for FreeLatticeOracle {
    type Elem = AntichainForm;

    fn generators(&self) -> Vec<AntichainForm> {
        (0..self.n_generators)
            .map(|i| AntichainForm::generator(self.n_generators, i).expect("in range"))
            .collect()
    }

    fn join(&self, a: &AntichainForm, b: &AntichainForm) -> AntichainForm {
        fdl_join(a, b).expect("same generator count")
    }

    fn meet(&self, a: &AntichainForm, b: &AntichainForm) -> AntichainForm {
        fdl_meet(a, b).expect("same generator count")
    }

    fn leq(&self, a: &AntichainForm, b: &AntichainForm) -> Result<bool> {
        fdl_leq(a, b)
    }

    fn equal(&self, a: &AntichainForm, b: &AntichainForm) -> Result<bool> {
        Ok(a == b)
    }

    fn describe(&self, a: &AntichainForm) -> String {
        a.to_string()
    }
}

/// A table lattice with chosen generators as an oracle.
#[derive(Clone, Debug)]
pub struct TableOracle {
    pub lattice: FiniteLattice,
    pub generators: Vec<usize>,
}

impl LatticeOracle for TableOracle {
    type Elem = usize;

    fn generators(&self) -> Vec<usize> {
        self.generators.clone()
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        self.lattice.join(*a, *b)
    }

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.lattice.meet(*a, *b)
    }

    fn leq(&self, a: &usize, b: &usize) -> Result<bool> {
        Ok(self.lattice.leq(*a, *b))
    }

    fn describe(&self, a: &usize) -> String {
        self.lattice.labels()[*a].clone()
    }
}
