use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::report::Report;

/// A finite group given by its multiplication table over `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    id: usize,
}

impl FiniteGroup {
    /// Validates a row-major table `mul[a * n + b] = a·b`. The identity and
    /// inverses are located from the table; associativity is checked
    /// exhaustively.
    pub fn from_table(order: usize, mul: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidInput(
                "a group needs at least one element".into(),
            ));
        }
        if mul.len() != order * order {
            return Err(Error::dimension(order * order, mul.len()));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= order) {
            return Err(Error::InvalidInput(format!(
                "table entry {bad} out of range"
            )));
        }
        let id = (0..order)
            .find(|&e| (0..order).all(|a| mul[e * order + a] == a && mul[a * order + e] == a))
            .ok_or_else(|| Error::InvalidInput("multiplication table has no identity".into()))?;
        let mut inv = vec![0; order];
        for a in 0..order {
            inv[a] = (0..order)
                .find(|&b| mul[a * order + b] == id && mul[b * order + a] == id)
                .ok_or_else(|| Error::InvalidInput(format!("element {a} has no inverse")))?;
        }
        let group = Self {
            order,
            mul,
            inv,
            id,
        };
        if let Some((a, b, c)) = group.first_non_associative() {
            return Err(Error::InvalidInput(format!(
                "multiplication is not associative at ({a}, {b}, {c})"
            )));
        }
        Ok(group)
    }

    /// Same as [`from_table`](Self::from_table) with an explicit identity,
    /// which must agree with the table.
    pub fn with_identity(order: usize, mul: Vec<usize>, id: usize) -> Result<Self> {
        let g = Self::from_table(order, mul)?;
        if g.id != id {
            return Err(Error::InvalidInput(format!(
                "declared identity {id} is not the identity of the table ({})",
                g.id
            )));
        }
        Ok(g)
    }

    fn first_non_associative(&self) -> Option<(usize, usize, usize)> {
        let n = self.order;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn trivial() -> Self {
        Self {
            order: 1,
            mul: vec![0],
            inv: vec![0],
            id: 0,
        }
    }

    /// ℤ/n with element `k` standing for `k mod n`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic group of order zero");
        let mul = (0..n * n).map(|k| (k / n + k % n) % n).collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        Self {
            order: n,
            mul,
            inv,
            id: 0,
        }
    }

    /// The symmetric group on `k` letters; elements are permutations in
    /// lexicographic order, and `a·b` means "apply `b` first, then `a`".
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
        let n = perms.len();
        let mut mul = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let composed: Vec<usize> = (0..k).map(|i| perms[a][perms[b][i]]).collect();
                mul[a * n + b] = index(&composed);
            }
        }
        Self::from_table(n, mul).expect("symmetric group table is valid")
    }

    /// Permutations of `0..k` in the order used by [`symmetric`](Self::symmetric).
    pub fn symmetric_elements(k: usize) -> Vec<Vec<usize>> {
        permutations(k)
    }

    /// Direct product with element `(a, b)` at index `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let (n, m) = (self.order, other.order);
        let mut mul = vec![0; n * m * n * m];
        for x in 0..n * m {
            for y in 0..n * m {
                let a = self.mul(x / m, y / m);
                let b = other.mul(x % m, y % m);
                mul[x * n * m + y] = a * m + b;
            }
        }
        let inv = (0..n * m)
            .map(|x| self.inv(x / m) * m + other.inv(x % m))
            .collect();
        FiniteGroup {
            order: n * m,
            mul,
            inv,
            id: self.id * m + other.id,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.mul
    }

    pub fn elements(&self) -> core::ops::Range<usize> {
        0..self.order
    }

    pub fn conj(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Subgroup generated by the given elements, in ascending order.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[self.id] = true;
        let mut stack = vec![self.id];
        while let Some(x) = stack.pop() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        (0..self.order).filter(|&x| seen[x]).collect()
    }

    /// Restricts the table to a subset closed under multiplication, reindexed
    /// by position in `members`.
    pub fn subgroup(&self, members: &[usize]) -> Result<FiniteGroup> {
        let pos = |x: usize| members.iter().position(|&m| m == x);
        let n = members.len();
        let mut mul = vec![0; n * n];
        for (i, &a) in members.iter().enumerate() {
            for (j, &b) in members.iter().enumerate() {
                mul[i * n + j] = pos(self.mul(a, b))
                    .ok_or_else(|| Error::Closure(format!("product {a}·{b} leaves the subset")))?;
            }
        }
        FiniteGroup::from_table(n, mul)
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Checks that `map` is a group homomorphism `src → dst`, naming each failed
/// pair under `label`.
pub fn check_homomorphism(
    src: &FiniteGroup,
    dst: &FiniteGroup,
    map: &[usize],
    label: &str,
) -> Report {
    let mut report = Report::new();
    if map.len() != src.order() {
        report.push(
            label,
            format!(
                "{label} has {} entries, expected {}",
                map.len(),
                src.order()
            ),
            1.0,
        );
        return report;
    }
    if let Some((i, &bad)) = map.iter().enumerate().find(|(_, &v)| v >= dst.order()) {
        report.push(
            format!("{label}({i})"),
            format!("{label} value {bad} out of range"),
            1.0,
        );
        return report;
    }
    for a in src.elements() {
        for b in src.elements() {
            if map[src.mul(a, b)] != dst.mul(map[a], map[b]) {
                report.push(
                    format!("({a}, {b})"),
                    format!("{label}(a·b) = {label}(a)·{label}(b)"),
                    1.0,
                );
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_and_symmetric_are_groups() {
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.mul(3, 2), 1);
        assert_eq!(z4.inv(1), 3);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(FiniteGroup::from_table(6, s3.table().to_vec()).is_ok());
        let nonabelian = (0..6).any(|a| (0..6).any(|b| !s3.commute(a, b)));
        assert!(nonabelian);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1, 1]).is_err());
        assert!(FiniteGroup::from_table(2, vec![0, 1, 1]).is_err());
        assert!(FiniteGroup::from_table(0, vec![]).is_err());
        // identity 0 but declared 1
        assert!(FiniteGroup::with_identity(2, vec![0, 1, 1, 0], 1).is_err());
    }

    #[test]
    fn product_and_subgroups() {
        let g = FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(3));
        assert_eq!(g.order(), 6);
        assert!(FiniteGroup::from_table(6, g.table().to_vec()).is_ok());
        let z4 = FiniteGroup::cyclic(4);
        assert_eq!(z4.generated(&[2]), vec![0, 2]);
        let sub = z4.subgroup(&[0, 2]).unwrap();
        assert_eq!(sub.order(), 2);
        assert!(z4.subgroup(&[0, 1]).is_err());
    }

    #[test]
    fn homomorphism_check_names_failures() {
        let z4 = FiniteGroup::cyclic(4);
        let z2 = FiniteGroup::cyclic(2);
        assert!(check_homomorphism(&z4, &z2, &[0, 1, 0, 1], "f").is_ok());
        let bad = check_homomorphism(&z4, &z2, &[0, 1, 1, 1], "f");
        assert!(!bad.is_ok());
        assert!(bad.mentions("f(a·b)"));
    }
}
