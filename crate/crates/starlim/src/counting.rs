//! Reference counting sequences.
//!
//! These closed recurrences are the independent oracles the enumerators in
//! [`crate::partitions`] are tested against: an enumerator is trusted only
//! because its stream length matches the recurrence value, which is computed
//! without enumerating anything.

/// Bell numbers `B(0..=n_max)` via the Bell triangle.
///
/// `B(k)` counts the set partitions of `{1,…,k}`; `B(0) = 1`.
pub fn bell_numbers(n_max: usize) -> Vec<u128> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(1u128);
    let mut row = vec![1u128];
    for _ in 1..=n_max {
        // B(n) is the last entry of triangle row n-1
        out.push(*row.last().unwrap());
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    out
}

/// Number of perfect matchings (pair partitions) of `m` points:
/// `(m-1)!! = 1·3·5⋯(m-1)` for even `m`, `1` for `m = 0`, `0` for odd `m`.
///
/// This is also the double factorial convention used by the moment routes,
/// where `(-1)!!` and `1!!` are both `1`.
pub fn pairing_count(m: usize) -> u128 {
    if m % 2 == 1 {
        return 0;
    }
    let mut acc = 1u128;
    let mut f = 1u128;
    while f + 1 < m as u128 {
        f += 2;
        acc *= f;
    }
    acc
}

/// Involution numbers `I(0..=n_max)`, `I(k) = I(k-1) + (k-1)·I(k-2)`.
///
/// `I(k)` counts the partitions of `{1,…,k}` into blocks of size at most 2.
pub fn involution_numbers(n_max: usize) -> Vec<u128> {
    let mut out = vec![1u128; n_max + 1];
    if n_max >= 1 {
        out[1] = 1;
    }
    for k in 2..=n_max {
        out[k] = out[k - 1] + (k as u128 - 1) * out[k - 2];
    }
    out
}

/// Number of bicoloured pair partitions of `{1,…,k}`: `(k-1)!! · 2^(k/2)`.
pub fn bicoloured_count(k: usize) -> u128 {
    if k % 2 == 1 {
        0
    } else {
        pairing_count(k) << (k / 2)
    }
}

/// Binomial coefficient `C(n, k)` as `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u128;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_prefix_matches_known_values() {
        assert_eq!(
            bell_numbers(10),
            vec![1, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975]
        );
    }

    #[test]
    fn pairing_counts_are_odd_double_factorials() {
        assert_eq!(pairing_count(0), 1);
        assert_eq!(pairing_count(1), 0);
        assert_eq!(pairing_count(2), 1);
        assert_eq!(pairing_count(4), 3);
        assert_eq!(pairing_count(6), 15);
        assert_eq!(pairing_count(8), 105);
        assert_eq!(pairing_count(10), 945);
    }

    #[test]
    fn involution_numbers_match_direct_formula() {
        // I(k) = sum over j of k! / (j! 2^j (k-2j)!), the number of ways to
        // choose j disjoint pairs and leave the rest as singletons.
        let table = involution_numbers(10);
        for (k, &got) in table.iter().enumerate() {
            let mut expect = 0u128;
            for j in 0..=k / 2 {
                expect += binomial(k, 2 * j) * pairing_count(2 * j);
            }
            assert_eq!(got, expect, "k = {k}");
        }
        assert_eq!(table[4], 10);
        assert_eq!(table[8], 764);
    }

    #[test]
    fn bicoloured_counts() {
        assert_eq!(bicoloured_count(2), 2);
        assert_eq!(bicoloured_count(4), 12);
        assert_eq!(bicoloured_count(3), 0);
        assert_eq!(bicoloured_count(8), 105 << 4);
    }

    #[test]
    fn binomial_row_sums() {
        let total: u128 = (0..=8).map(|k| binomial(8, k)).sum();
        assert_eq!(total, 256);
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(3, 10), 0);
    }
}
