//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use num_traits::Zero;
use tqps_core::{Scalar, ToeplitzElement};

/// Antichains of the Boolean lattice on `n ≤ 4` points, by filtering all
/// `2^(2^n)` families of subsets.
pub fn naive_dedekind(n: u32) -> u64 {
    let subsets = 1u32 << n;
    let mut count = 0;
    for family in 0u64..1u64 << subsets {
        let members: Vec<u32> = (0..subsets).filter(|&s| family >> s & 1 == 1).collect();
        let ok = members
            .iter()
            .all(|&a| members.iter().all(|&b| a == b || (a & !b != 0 && b & !a != 0)));
        if ok {
            count += 1;
        }
    }
    count
}

/// Monotone Boolean functions on `n` variables as truth-table bitmasks.
fn monotone_functions(n: u32) -> Vec<u32> {
    let points = 1u32 << n;
    (0u64..1u64 << points)
        .map(|f| f as u32)
        .filter(|&f| {
            (0..points).all(|x| f >> x & 1 == 0 || (0..n).all(|i| f >> (x | 1 << i) & 1 == 1))
        })
        .collect()
}

/// `M(5)` as the number of pairs `f ≤ g` of monotone functions on four
/// variables: a monotone function on five variables splits along the last
/// one into such a pair.
pub fn dedekind_5_by_pairs() -> u64 {
    let m4 = monotone_functions(4);
    let mut count = 0;
    for &f in &m4 {
        for &g in &m4 {
            if f & !g == 0 {
                count += 1;
            }
        }
    }
    count
}

/// Dense `d × d` truncation of a Toeplitz element, read off its symbol and
/// compact part.
pub fn truncate(x: &ToeplitzElement, d: usize) -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![Scalar::zero(); d]; d];
    for (deg, c) in x.symbol().terms() {
        for k in 0..d as i64 {
            let j = k + deg;
            if (0..d as i64).contains(&j) {
                m[j as usize][k as usize] += c;
            }
        }
    }
    for ((j, k), c) in x.compact().entries() {
        if (j as usize) < d && (k as usize) < d {
            m[j as usize][k as usize] += c;
        }
    }
    m
}

pub fn matmul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let d = a.len();
    let mut out = vec![vec![Scalar::zero(); d]; d];
    for j in 0..d {
        for l in 0..d {
            if a[j][l].is_zero() {
                continue;
            }
            for k in 0..d {
                if !b[l][k].is_zero() {
                    out[j][k] += &(&a[j][l] * &b[l][k]);
                }
            }
        }
    }
    out
}

/// Compares `x·y` with the product of truncations on the top-left
/// `(d − band)²` block; returns the first differing entry.
pub fn truncated_product_mismatch(
    x: &ToeplitzElement,
    y: &ToeplitzElement,
    d: usize,
    band: usize,
) -> Option<(usize, usize)> {
    let exact = truncate(&(x * y), d);
    let dense = matmul(&truncate(x, d), &truncate(y, d));
    let w = d - band;
    (0..w).flat_map(|j| (0..w).map(move |k| (j, k))).find(|&(j, k)| exact[j][k] != dense[j][k])
}
