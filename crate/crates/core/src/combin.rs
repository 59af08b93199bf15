//! Binomial coefficients and lexicographic ranking of sorted index tuples.
//!
//! Points are labeled `1..=n`. Triples, quadruples and 5-tuples are always
//! strictly increasing and ranked in lexicographic order starting from 0.

use num_bigint::BigUint;

/// `C(n, k)` in `u128`; saturates at `u128::MAX` on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `C(n, k)` as a big integer.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Number of sorted triples over `n` points.
pub fn num_triples(n: usize) -> usize {
    binomial(n as u64, 3) as usize
}

/// Lexicographic successor of a strictly increasing tuple over `1..=n`.
/// Returns `false` once the last combination has been passed.
pub fn next_combination(tuple: &mut [usize], n: usize) -> bool {
    let k = tuple.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if tuple[i] < n - (k - 1 - i) {
            tuple[i] += 1;
            for j in i + 1..k {
                tuple[j] = tuple[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `f` on every sorted `K`-tuple over `1..=n`, in lexicographic order.
pub fn for_each_tuple<const K: usize>(n: usize, mut f: impl FnMut(&[usize; K])) {
    if K == 0 || n < K {
        return;
    }
    let mut t = [0usize; K];
    for (i, slot) in t.iter_mut().enumerate() {
        *slot = i + 1;
    }
    loop {
        f(&t);
        if !next_combination(&mut t, n) {
            break;
        }
    }
}

/// Dense lookup table from a sorted triple `(a, b, c)` to its lexicographic rank.
#[derive(Clone, Debug)]
pub struct TripleIndex {
    n: usize,
    table: Vec<u32>,
}

impl TripleIndex {
    pub fn new(n: usize) -> Self {
        let side = n + 1;
        let mut table = vec![u32::MAX; side * side * side];
        let mut rank = 0u32;
        for_each_tuple::<3>(n, |&[a, b, c]| {
            table[(a * side + b) * side + c] = rank;
            rank += 1;
        });
        TripleIndex { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        num_triples(self.n)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rank of `(a, b, c)`; requires `1 <= a < b < c <= n`.
    #[inline]
    pub fn rank(&self, a: usize, b: usize, c: usize) -> usize {
        debug_assert!(1 <= a && a < b && b < c && c <= self.n);
        let side = self.n + 1;
        self.table[(a * side + b) * side + c] as usize
    }

    /// Inverse of [`rank`](Self::rank).
    pub fn unrank(&self, rank: usize) -> (usize, usize, usize) {
        let mut r = rank;
        let n = self.n;
        for a in 1..=n {
            let block = binomial((n - a) as u64, 2) as usize;
            if r < block {
                for b in a + 1..=n {
                    let row = n - b;
                    if r < row {
                        return (a, b, b + 1 + r);
                    }
                    r -= row;
                }
            }
            r -= block;
        }
        panic!("triple rank {rank} out of range for n = {n}");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(16, 5), 4368);
        assert_eq!(binomial(24, 5), 42504);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial_big(380, 5), BigUint::from(binomial(380, 5)));
    }

    #[test]
    fn tuples_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_tuple::<3>(5, |t| seen.push(*t));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], [1, 2, 3]);
        assert_eq!(seen[1], [1, 2, 4]);
        assert_eq!(seen[9], [3, 4, 5]);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn triple_rank_roundtrip() {
        let idx = TripleIndex::new(9);
        let mut expected = 0;
        for_each_tuple::<3>(9, |&[a, b, c]| {
            assert_eq!(idx.rank(a, b, c), expected);
            assert_eq!(idx.unrank(expected), (a, b, c));
            expected += 1;
        });
        assert_eq!(expected, 84);
    }
}
