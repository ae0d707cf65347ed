//! Multi-indices for partial derivatives and monomial maps.

use num_bigint::BigUint;

/// A multi-index `(a_1, ..., a_k)` of nonnegative exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(k: usize) -> Self {
        MultiIndex(vec![0; k])
    }

    pub fn unit(k: usize, i: usize) -> Self {
        let mut v = vec![0; k];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|alpha|`, the total degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }
}

/// `[n, m] = C(n + m, m)`, exactly.
pub fn binom(n: u64, m: u64) -> BigUint {
    num_integer::binomial(BigUint::from(n + m), BigUint::from(m))
}

/// All multi-indices in `k` variables of total degree exactly `j`,
/// in lexicographically descending order (so `(j,0,..)` first).
pub fn indices_of_degree(k: usize, j: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; k];
    fill(&mut out, &mut current, 0, j);
    out
}

fn fill(out: &mut Vec<MultiIndex>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos + 1 == current.len() {
        current[pos] = remaining;
        out.push(MultiIndex(current.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill(out, current, pos + 1, remaining - e);
    }
    current[pos] = 0;
}

/// All multi-indices with `0 < |alpha| <= n`, degree-major then lex-descending.
/// This is the coordinate order of the monomial (Veronese) charts: the
/// degree-one block comes first, so parameter recovery is a projection.
pub fn indices_up_to(k: usize, n: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    for j in 1..=n {
        out.extend(indices_of_degree(k, j));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binom_small() {
        assert_eq!(binom(1, 1), BigUint::from(2u32)); // [k-1,1] with k=2
        assert_eq!(binom(1, 2), BigUint::from(3u32));
        assert_eq!(binom(0, 5), BigUint::from(1u32));
    }

    #[test]
    fn pascal_identity_grid() {
        for a in 1..=20u64 {
            for b in 1..=20u64 {
                assert_eq!(binom(a, b), binom(a - 1, b) + binom(a, b - 1));
            }
        }
    }

    #[test]
    fn degree_two_order_matches_monomial_convention() {
        let idx = indices_of_degree(2, 2);
        let exps: Vec<Vec<u32>> = idx.iter().map(|m| m.0.clone()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn count_matches_binomial() {
        for k in 1..=4usize {
            for n in 1..=5u32 {
                let count = indices_up_to(k, n).len() as u64;
                // |{0 < |a| <= n}| = [k, n] - 1
                let expected = binom(k as u64, n as u64) - BigUint::from(1u32);
                assert_eq!(BigUint::from(count), expected);
            }
        }
    }
}
