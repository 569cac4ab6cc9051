//! Finite groups stored as explicit multiplication tables.
//!
//! Elements are indices `0..order`, with `0` always the identity. The
//! built-in families (cyclic, dihedral, Clifford) and direct products are
//! constructed exactly; arbitrary groups come in through
//! [`Group::from_cayley_table`], which validates the group axioms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default upper bound on group order accepted by [`Group::direct_product`].
pub const DEFAULT_MAX_ORDER: usize = 4096;

/// Hard ceiling on the order of any multiplication table this crate allocates.
pub const TABLE_CEILING: usize = 1 << 13;

/// Orders up to this are checked for associativity exhaustively.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 512;

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Group {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    labels: Vec<String>,
}

impl Group {
    fn from_fn<F>(order: usize, labels: Vec<String>, mul: F) -> Group
    where
        F: Fn(usize, usize) -> usize,
    {
        let mut table = vec![0u32; order * order];
        for x in 0..order {
            for y in 0..order {
                table[x * order + y] = mul(x, y) as u32;
            }
        }
        let mut group = Group {
            order,
            table,
            inverses: Vec::new(),
            labels,
        };
        group.inverses = (0..order)
            .map(|x| (0..order).find(|&y| group.mul(x, y) == 0).unwrap_or(0) as u32)
            .collect();
        group
    }

    fn check_ceiling(order: usize) -> Result<()> {
        if order > TABLE_CEILING {
            return Err(Error::SizeLimit {
                order,
                limit: TABLE_CEILING,
            });
        }
        Ok(())
    }

    /// The cyclic group `Z_n` with `x * y = (x + y) mod n`.
    pub fn cyclic(n: usize) -> Result<Group> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic order must be >= 1".into()));
        }
        Self::check_ceiling(n)?;
        let labels = (0..n).map(|x| x.to_string()).collect();
        Ok(Self::from_fn(n, labels, |x, y| (x + y) % n))
    }

    /// The dihedral group of order `two_n = 2n`, `n >= 2`.
    ///
    /// Index `r` is `a^r` and index `n + r` is `a^r b`, with `a^n = b^2 = 1`
    /// and `b a b = a^-1`.
    pub fn dihedral(two_n: usize) -> Result<Group> {
        if two_n < 4 || !two_n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "dihedral order must be even and >= 4, got {two_n}"
            )));
        }
        Self::check_ceiling(two_n)?;
        let n = two_n / 2;
        let rot = |r: usize| match r {
            0 => String::new(),
            1 => "a".to_string(),
            _ => format!("a^{r}"),
        };
        let labels = (0..two_n)
            .map(|x| {
                if x == 0 {
                    "e".to_string()
                } else if x < n {
                    rot(x)
                } else {
                    format!("{}b", rot(x - n))
                }
            })
            .collect();
        Ok(Self::from_fn(two_n, labels, move |x, y| {
            let (r, s) = (x % n, x / n);
            let (t, u) = (y % n, y / n);
            // a^r b^s a^t b^u = a^(r + (-1)^s t) b^(s + u)
            let rot = if s == 0 { (r + t) % n } else { (r + n - t) % n };
            rot + n * ((s + u) % 2)
        }))
    }

    /// The Clifford group `CL(n)` of order `2^(n+1)`, `n >= 3`.
    ///
    /// Element `2 * mask + sign` stands for `(-1)^sign * g_{i1} ... g_{ik}`
    /// where bit `i - 1` of `mask` is set for each generator `g_i` present, in
    /// ascending order. Products use `g_i g_j = -g_j g_i` (`i != j`) and `g_i^2 = 1`.
    pub fn clifford(n: usize) -> Result<Group> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!(
                "Clifford group needs n >= 3, got {n}"
            )));
        }
        if n >= usize::BITS as usize - 2 {
            return Err(Error::SizeLimit {
                order: usize::MAX,
                limit: TABLE_CEILING,
            });
        }
        let order = 1usize << (n + 1);
        Self::check_ceiling(order)?;
        let labels = (0..order)
            .map(|x| {
                let (mask, sign) = (x >> 1, x & 1);
                let mut s = String::new();
                if sign == 1 {
                    s.push('-');
                }
                if mask == 0 {
                    s.push('1');
                }
                for i in 0..n {
                    if mask >> i & 1 == 1 {
                        s.push_str(&format!("g{}", i + 1));
                    }
                }
                s
            })
            .collect();
        Ok(Self::from_fn(order, labels, |x, y| {
            let (a, sa) = (x >> 1, x & 1);
            let (b, sb) = (y >> 1, y & 1);
            // Moving each g_j of b left past every g_i of a with i > j flips the sign.
            let mut swaps = 0u32;
            let mut rest = b;
            while rest != 0 {
                let j = rest.trailing_zeros();
                swaps += (a >> (j + 1)).count_ones();
                rest &= rest - 1;
            }
            let sign = (sa + sb + swaps as usize) % 2;
            ((a ^ b) << 1) | sign
        }))
    }

    /// Symmetric group `S_n` (`1 <= n <= 7`) acting on `0..n`. Elements are
    /// permutations in lexicographic order of their image strings, and
    /// `mul(x, y)` applies `y` first.
    pub fn symmetric(n: usize) -> Result<Group> {
        Self::permutations(n, false)
    }

    /// Alternating group `A_n` (`1 <= n <= 7`), the even permutations of
    /// [`Group::symmetric`] in the same order.
    pub fn alternating(n: usize) -> Result<Group> {
        Self::permutations(n, true)
    }

    fn permutations(n: usize, even_only: bool) -> Result<Group> {
        if !(1..=7).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "permutation degree must be in 1..=7, got {n}"
            )));
        }
        let mut perms: Vec<Vec<u8>> = Vec::new();
        let mut current: Vec<u8> = (0..n as u8).collect();
        loop {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| current[i] > current[j])
                .count();
            if !even_only || inversions % 2 == 0 {
                perms.push(current.clone());
            }
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
            current.swap(i, j);
            current[i + 1..].reverse();
        }
        let index: BTreeMap<Vec<u8>, usize> =
            perms.iter().enumerate().map(|(k, p)| (p.clone(), k)).collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|&v| char::from(b'0' + v)).collect())
            .collect();
        let order = perms.len();
        Ok(Self::from_fn(order, labels, |x, y| {
            let composed: Vec<u8> = perms[y].iter().map(|&v| perms[x][v as usize]).collect();
            index[&composed]
        }))
    }

    /// Direct product `self x other`; element `(x, y)` has index `x * |other| + y`.
    pub fn direct_product(&self, other: &Group, max_order: usize) -> Result<Group> {
        let order = self
            .order
            .checked_mul(other.order)
            .ok_or(Error::SizeLimit {
                order: usize::MAX,
                limit: max_order,
            })?;
        if order > max_order {
            return Err(Error::SizeLimit {
                order,
                limit: max_order,
            });
        }
        Self::check_ceiling(order)?;
        let m = other.order;
        let labels = (0..order)
            .map(|x| format!("({},{})", self.labels[x / m], other.labels[x % m]))
            .collect();
        Ok(Self::from_fn(order, labels, |x, y| {
            self.mul(x / m, y / m) * m + other.mul(x % m, y % m)
        }))
    }

    /// Validates and ingests a Cayley table. The identity is moved to index 0;
    /// the remaining elements keep their relative order.
    ///
    /// Without explicit labels, each element is labelled by its index in the
    /// input table.
    pub fn from_cayley_table(table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Group> {
        let n = table.len();
        if n == 0 {
            return Err(Error::MalformedTable("empty table".into()));
        }
        Self::check_ceiling(n)?;
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedTable(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::MalformedTable(format!(
                    "entry {bad} in row {i} is out of range 0..{n}"
                )));
            }
        }
        let labels = match labels {
            Some(l) if l.len() != n => {
                return Err(Error::MalformedTable(format!(
                    "{} labels for {n} elements",
                    l.len()
                )))
            }
            Some(l) => l,
            None => (0..n).map(|x| x.to_string()).collect(),
        };
        let mut seen = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                let v = table[i][j];
                if seen[v] == 2 * i + 1 {
                    return Err(Error::MalformedTable(format!("row {i} repeats {v}")));
                }
                seen[v] = 2 * i + 1;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for j in 0..n {
            for i in 0..n {
                let v = table[i][j];
                if seen[v] == j + 1 {
                    return Err(Error::MalformedTable(format!("column {j} repeats {v}")));
                }
                seen[v] = j + 1;
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::NotAGroup("no two-sided identity".into()))?;

        // new index -> old index
        let order_map: Vec<usize> = core::iter::once(identity)
            .chain((0..n).filter(|&x| x != identity))
            .collect();
        let mut old_to_new = vec![0usize; n];
        for (new, &old) in order_map.iter().enumerate() {
            old_to_new[old] = new;
        }
        let new_labels = order_map.iter().map(|&o| labels[o].clone()).collect();
        let group = Self::from_fn(n, new_labels, |x, y| {
            old_to_new[table[order_map[x]][order_map[y]]]
        });
        group.check_associative()?;
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inverses[x] as usize
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The multiplication table as rows.
    pub fn cayley_table(&self) -> Vec<Vec<usize>> {
        (0..self.order)
            .map(|x| (0..self.order).map(|y| self.mul(x, y)).collect())
            .collect()
    }

    /// Looks up an element by label.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|x| (x..self.order).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Smallest `k >= 1` with `x^k = e`.
    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut p = x;
        while p != 0 {
            p = self.mul(p, x);
            k += 1;
        }
        k
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Elements commuting with every element, ascending.
    pub fn center(&self) -> Vec<usize> {
        (0..self.order)
            .filter(|&z| (0..self.order).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    /// Checks every group axiom on the stored table.
    pub fn validate(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return Err(Error::NotAGroup(format!("identity law fails at {x}")));
            }
            if self.mul(x, self.inv(x)) != 0 {
                return Err(Error::NotAGroup(format!("bad inverse for {x}")));
            }
            let mut row = vec![false; n];
            let mut col = vec![false; n];
            for y in 0..n {
                row[self.mul(x, y)] = true;
                col[self.mul(y, x)] = true;
            }
            if row.iter().chain(col.iter()).any(|s| !s) {
                return Err(Error::MalformedTable(format!("row/column {x} is not a permutation")));
            }
        }
        self.check_associative()
    }

    fn check_associative(&self) -> Result<()> {
        let n = self.order;
        let fail = |x, y, z| Err(Error::NotAGroup(format!("associativity fails for ({x}, {y}, {z})")));
        if n <= EXHAUSTIVE_ASSOCIATIVITY {
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul(x, y);
                    for z in 0..n {
                        if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                            return fail(x, y, z);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a550c);
            for _ in 0..10 * n * n {
                let x = (rng.next_u64() % n as u64) as usize;
                let y = (rng.next_u64() % n as u64) as usize;
                let z = (rng.next_u64() % n as u64) as usize;
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                    return fail(x, y, z);
                }
            }
        }
        Ok(())
    }

    /// Partitions the group into conjugacy classes.
    ///
    /// Classes are ordered by their smallest element index, so the identity
    /// class comes first and the order follows the element numbering.
    pub fn conjugacy_classes(&self) -> ClassSet {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let idx = classes.len();
            let mut members = Vec::new();
            for g in 0..n {
                let c = self.conjugate(g, x);
                if class_of[c] == usize::MAX {
                    class_of[c] = idx;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        let inverse_class = classes
            .iter()
            .map(|c| class_of[self.inv(c[0])])
            .collect();
        ClassSet {
            classes,
            class_of,
            inverse_class,
        }
    }
}

/// The conjugacy classes of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSet {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    inverse_class: Vec<usize>,
}

impl ClassSet {
    /// Number of classes, `d + 1`.
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Scheme diameter `d`.
    pub fn diameter(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn class(&self, i: usize) -> &[usize] {
        &self.classes[i]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_lookup(&self) -> &[usize] {
        &self.class_of
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    pub fn size(&self, i: usize) -> usize {
        self.classes[i].len()
    }

    /// Index `i*` with `C_{i*} = C_i^-1`.
    pub fn inverse_class(&self, i: usize) -> usize {
        self.inverse_class[i]
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.inverse_class[i] == i
    }

    /// The smallest member of each class.
    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }

    pub fn representative(&self, i: usize) -> usize {
        self.classes[i][0]
    }

    /// Indices of the singleton classes other than the identity class.
    pub fn central_classes(&self) -> Vec<usize> {
        (1..self.len()).filter(|&i| self.classes[i].len() == 1).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_center(g: &Group) -> Vec<usize> {
        let mut z = Vec::new();
        for x in 0..g.order() {
            if (0..g.order()).all(|y| g.mul(x, y) == g.mul(y, x)) {
                z.push(x);
            }
        }
        z
    }

    #[test]
    fn cyclic_basics() {
        let z2 = Group::cyclic(2).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!((0..2).map(|x| z2.inv(x)).collect::<Vec<_>>(), vec![0, 1]);
        let z4 = Group::cyclic(4).unwrap();
        assert_eq!(z4.conjugacy_classes().sizes(), vec![1, 1, 1, 1]);
        assert_eq!(Group::cyclic(3).unwrap().element_order(1), 3);
        assert!(matches!(Group::cyclic(0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn dihedral_eight() {
        let d8 = Group::dihedral(8).unwrap();
        d8.validate().unwrap();
        let cs = d8.conjugacy_classes();
        let named: Vec<Vec<&str>> = cs
            .classes()
            .iter()
            .map(|c| c.iter().map(|&x| d8.label(x)).collect())
            .collect();
        assert_eq!(
            named,
            vec![
                vec!["e"],
                vec!["a", "a^3"],
                vec!["a^2"],
                vec!["b", "a^2b"],
                vec!["ab", "a^3b"]
            ]
        );
        assert_eq!(cs.sizes(), vec![1, 2, 1, 2, 2]);
        assert_eq!(d8.center(), brute_center(&d8));
        assert_eq!(d8.center(), vec![0, 2]);
        // b^-1 a b = a^-1
        let (a, b) = (d8.find("a").unwrap(), d8.find("b").unwrap());
        assert_eq!(d8.conjugate(d8.inv(b), a), d8.inv(a));
    }

    #[test]
    fn dihedral_twelve_and_errors() {
        let d12 = Group::dihedral(12).unwrap();
        assert_eq!(d12.conjugacy_classes().sizes(), vec![1, 2, 2, 1, 3, 3]);
        // odd n: D_6 has classes {e}, {a, a^2}, {b, ab, a^2b}
        assert_eq!(Group::dihedral(6).unwrap().conjugacy_classes().sizes(), vec![1, 2, 3]);
        for bad in [0, 2, 7, 9] {
            assert!(matches!(Group::dihedral(bad), Err(Error::InvalidParameter(_))));
        }
    }

    #[test]
    fn clifford_centers() {
        let cl4 = Group::clifford(4).unwrap();
        assert_eq!(cl4.order(), 32);
        cl4.validate().unwrap();
        let labels: Vec<&str> = cl4.center().iter().map(|&x| cl4.label(x)).collect();
        assert_eq!(labels, vec!["1", "-1"]);
        let cs = cl4.conjugacy_classes();
        assert_eq!(cs.len(), 17);
        let sizes = cs.sizes();
        assert_eq!(&sizes[..3], &[1, 1, 2]);
        assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 2);

        let cl3 = Group::clifford(3).unwrap();
        let labels: Vec<&str> = cl3.center().iter().map(|&x| cl3.label(x)).collect();
        assert_eq!(labels, vec!["1", "-1", "g1g2g3", "-g1g2g3"]);
        assert_eq!(cl3.center(), brute_center(&cl3));
        assert!(Group::clifford(2).is_err());
    }

    #[test]
    fn clifford_relations() {
        let cl = Group::clifford(5).unwrap();
        let g = |i: usize| 1usize << (i + 1);
        for i in 0..5 {
            assert_eq!(cl.mul(g(i), g(i)), 0);
            for j in 0..5 {
                if i != j {
                    // g_i g_j = - g_j g_i
                    assert_eq!(cl.mul(g(i), g(j)), cl.mul(g(j), g(i)) ^ 1);
                }
            }
        }
    }

    #[test]
    fn products() {
        let z2 = Group::cyclic(2).unwrap();
        let cube = z2
            .direct_product(&z2, DEFAULT_MAX_ORDER)
            .unwrap()
            .direct_product(&z2, DEFAULT_MAX_ORDER)
            .unwrap();
        assert_eq!(cube.order(), 8);
        assert_eq!(cube.conjugacy_classes().len(), 8);

        let d8z2 = Group::dihedral(8)
            .unwrap()
            .direct_product(&z2, DEFAULT_MAX_ORDER)
            .unwrap();
        assert_eq!(d8z2.order(), 16);
        assert_eq!(d8z2.conjugacy_classes().len(), 10);

        let z6 = Group::cyclic(2)
            .unwrap()
            .direct_product(&Group::cyclic(3).unwrap(), DEFAULT_MAX_ORDER)
            .unwrap();
        // (1,1) generates, and x -> k*(1,1) is an isomorphism onto Z_6
        let gen = 4; // (1,1) = 1 * 3 + 1
        let mut phi = [0usize; 6];
        let mut p = 0;
        for k in 0..6 {
            phi[k] = p;
            p = z6.mul(p, gen);
        }
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(z6.mul(phi[x], phi[y]), phi[(x + y) % 6]);
            }
        }
        assert!(matches!(
            z2.direct_product(&Group::cyclic(3000).unwrap(), DEFAULT_MAX_ORDER),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn cayley_ingestion() {
        let z2 = Group::from_cayley_table(&[vec![0, 1], vec![1, 0]], None).unwrap();
        assert_eq!(z2, Group::from_cayley_table(&[vec![0, 1], vec![1, 0]], None).unwrap());
        assert_eq!(z2.cayley_table(), Group::cyclic(2).unwrap().cayley_table());

        // Z_3 with identity stored at index 2
        let t = vec![vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 2]];
        let g = Group::from_cayley_table(&t, None).unwrap();
        assert_eq!(g.label(0), "2");
        assert_eq!(g.mul(1, 2), 0);
        assert_eq!(g.element_order(1), 3);

        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(matches!(
            Group::from_cayley_table(&bad, None),
            Err(Error::MalformedTable(_))
        ));
        // Latin square with identity that is not associative
        let quasi = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(
            Group::from_cayley_table(&quasi, None),
            Err(Error::NotAGroup(_))
        ));
        // Latin square without identity
        let noid = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        assert!(matches!(
            Group::from_cayley_table(&noid, None),
            Err(Error::NotAGroup(_))
        ));
    }

    #[test]
    fn inverse_classes() {
        let z3 = Group::cyclic(3).unwrap();
        let cs = z3.conjugacy_classes();
        assert_eq!(cs.inverse_class(1), 2);
        assert!(!cs.is_real(1));
        let d8 = Group::dihedral(8).unwrap().conjugacy_classes();
        assert!((0..d8.len()).all(|i| d8.is_real(i)));
    }
}
