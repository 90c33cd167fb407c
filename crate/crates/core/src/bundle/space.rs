use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::report::Report;

/// A finite discrete space; points are `0..len`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FiniteSpace {
    pub len: usize,
}

impl FiniteSpace {
    pub fn new(len: usize) -> Self {
        Self { len }
    }

    pub fn points(&self) -> core::ops::Range<usize> {
        0..self.len
    }
}

/// A surjection `π: Y → X`. Over a discrete base every surjection is
/// locally split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    total: FiniteSpace,
    base: FiniteSpace,
    proj: Vec<usize>,
}

impl Cover {
    pub fn new(base: usize, proj: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = proj.iter().find(|&&x| x >= base) {
            return Err(Error::InvalidInput(format!(
                "cover projects to {bad}, base has {base} points"
            )));
        }
        if let Some(x) = (0..base).find(|x| !proj.contains(x)) {
            return Err(Error::InvalidInput(format!(
                "base point {x} has no preimage"
            )));
        }
        Ok(Self {
            total: FiniteSpace::new(proj.len()),
            base: FiniteSpace::new(base),
            proj,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(n, (0..n).collect()).expect("identity is surjective")
    }

    pub fn total(&self) -> FiniteSpace {
        self.total
    }

    pub fn base(&self) -> FiniteSpace {
        self.base
    }

    pub fn proj(&self, y: usize) -> usize {
        self.proj[y]
    }

    pub fn proj_table(&self) -> &[usize] {
        &self.proj
    }

    /// `Y^{[k]}`: `k`-tuples with a common base point, in lexicographic order.
    pub fn fibre_product(&self, k: usize) -> FibreProduct {
        assert!(k >= 1, "fibre products start at k = 1");
        let mut points = Vec::new();
        for x in self.base.points() {
            let sheet: Vec<usize> = self.total.points().filter(|&y| self.proj[y] == x).collect();
            let m = sheet.len();
            for code in 0..m.pow(k as u32) {
                let mut rest = code;
                let mut tuple = vec![0; k];
                for slot in tuple.iter_mut().rev() {
                    *slot = sheet[rest % m];
                    rest /= m;
                }
                points.push(tuple);
            }
        }
        points.sort();
        let base = points.iter().map(|p| self.proj[p[0]]).collect();
        FibreProduct { k, points, base }
    }
}

/// `Y^{[k]}` with its points listed explicitly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibreProduct {
    k: usize,
    points: Vec<Vec<usize>>,
    base: Vec<usize>,
}

impl FibreProduct {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, z: usize) -> &[usize] {
        &self.points[z]
    }

    pub fn base_of(&self, z: usize) -> usize {
        self.base[z]
    }

    pub fn index(&self, tuple: &[usize]) -> Option<usize> {
        self.points
            .binary_search_by(|p| p.as_slice().cmp(tuple))
            .ok()
    }

    /// `pr_I(z)` for 1-based coordinates `I`, as a point of `target`.
    pub fn pr(&self, z: usize, coords: &[usize], target: &FibreProduct) -> usize {
        let tuple: Vec<usize> = coords.iter().map(|&c| self.points[z][c - 1]).collect();
        target
            .index(&tuple)
            .expect("projection of a fibre product point")
    }

    /// The full table of `pr_I`.
    pub fn pr_table(&self, coords: &[usize], target: &FibreProduct) -> Vec<usize> {
        (0..self.len())
            .map(|z| self.pr(z, coords, target))
            .collect()
    }
}

/// Checks `pr_{ij} ∘ pr_{ijk}`-style compatibility: for every pair of
/// coordinate choices `J ⊂ I`, projecting through `Y^{[|I|]}` agrees with
/// projecting directly.
pub fn check_projections(cover: &Cover, max_k: usize) -> Report {
    let mut report = Report::new();
    let products: Vec<FibreProduct> = (1..=max_k).map(|k| cover.fibre_product(k)).collect();
    for big in &products {
        for small in products.iter().filter(|p| p.k < big.k) {
            // I = (1..small.k+1) shifted, J = first and last of I
            for start in 1..=big.k - small.k + 1 {
                let coords: Vec<usize> = (start..start + small.k).collect();
                for z in 0..big.len() {
                    let direct = big.pr(z, &coords, small);
                    if small.base_of(direct) != big.base_of(z) {
                        report.push(
                            format!("Y^[{}] point {z}", big.k),
                            "pi(pr_I(z)) = pi(z)",
                            1.0,
                        );
                    }
                    if small.k >= 2 {
                        let tiny = &products[0];
                        let via = small.pr(direct, &[1], tiny);
                        if via != big.pr(z, &[start], tiny) {
                            report.push(
                                format!("Y^[{}] point {z}", big.k),
                                "pr_1 pr_I = pr_{I_1}",
                                1.0,
                            );
                        }
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_cover_products_are_diagonal() {
        let c = Cover::identity(3);
        for k in 1..4 {
            let y = c.fibre_product(k);
            assert_eq!(y.len(), 3);
            assert!(y.points.iter().all(|p| p.iter().all(|&q| q == p[0])));
        }
    }

    #[test]
    fn three_sheets_over_a_point() {
        let c = Cover::new(1, vec![0, 0, 0]).unwrap();
        let y2 = c.fibre_product(2);
        assert_eq!(y2.len(), 9);
        let y3 = c.fibre_product(3);
        assert_eq!(y3.len(), 27);
        let z = y3.index(&[2, 0, 1]).unwrap();
        assert_eq!(y2.point(y3.pr(z, &[1, 3], &y2)), &[2, 1]);
        assert!(check_projections(&c, 4).is_ok());
    }

    #[test]
    fn fibre_products_respect_the_base() {
        let c = Cover::new(2, vec![0, 1, 0, 1, 1]).unwrap();
        // 2² + 3² pairs
        assert_eq!(c.fibre_product(2).len(), 13);
        assert!(Cover::new(3, vec![0, 1]).is_err());
        assert!(Cover::new(1, vec![0, 2]).is_err());
    }
}
