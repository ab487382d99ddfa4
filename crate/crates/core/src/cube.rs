//! Exact arithmetic for the d-cube region counts: genus formula, region
//! count from Euler's formula, the region-vs-vertex threshold, and the
//! big-integer count of extensions it certifies as non-Hamiltonian.

use num_bigint::BigUint;
use thiserror::Error;

/// Exact surface data for the genus embedding of the d-cube.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeReport {
    pub d: u32,
    /// 2^d vertices.
    pub p: u128,
    /// d * 2^(d-1) edges.
    pub q: u128,
    /// Genus of the minimal orientable embedding.
    pub genus: u128,
    /// Region count, solved from Euler's formula.
    pub r: u128,
    /// Whether regions outnumber vertices (r > p).
    pub klee: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CubeError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("dimension {0} too large for exact u128 arithmetic")]
    DimensionTooLarge(u32),
}

/// Computes the exact report for dimension `d >= 2`.
///
/// Genus is 1 + (d-4)*2^(d-3), which is integral for all d >= 2 once
/// written as ((d-4) << d) / 8; the region count is solved from
/// p - q + r = 2 - 2*genus and cross-checked against d*2^(d-2).
pub fn cube_report(d: u32) -> Result<CubeReport, CubeError> {
    if d < 2 {
        return Err(CubeError::DimensionTooSmall(d));
    }
    if d > 100 {
        return Err(CubeError::DimensionTooLarge(d));
    }
    let p: i128 = 1i128 << d;
    let q: i128 = (d as i128) << (d - 1);
    let scaled = (d as i128 - 4) * (1i128 << d);
    debug_assert_eq!(scaled % 8, 0);
    let genus: i128 = 1 + scaled / 8;
    debug_assert!(genus >= 0);
    let r = 2 - 2 * genus - p + q;
    assert_eq!(
        r,
        (d as i128) << (d - 2),
        "Euler-derived region count disagrees with d*2^(d-2)"
    );
    Ok(CubeReport {
        d,
        p: p as u128,
        q: q as u128,
        genus: genus as u128,
        r: r as u128,
        klee: r > p,
    })
}

/// Number of ways to join a vertex inside a region to at least
/// `min_attach` of the `b` vertices on its boundary: sum of C(b, j) for
/// j = min_attach..=b.
pub fn connection_patterns(b: u32, min_attach: u32) -> BigUint {
    (min_attach..=b).map(|j| binomial(b, j)).sum()
}

/// Exact count of the constructed non-Hamiltonian extensions:
/// sum over k = s_min..=s_max of C(r_total, k) * patterns^k.
pub fn klee_count(r_total: u32, s_min: u32, s_max: u32, patterns: u32) -> BigUint {
    assert!(s_min <= s_max && s_max <= r_total, "need s_min <= s_max <= r_total");
    let patterns = BigUint::from(patterns);
    (s_min..=s_max)
        .map(|k| binomial(r_total, k) * patterns.pow(k))
        .sum()
}

/// Exact binomial coefficient.
pub fn binomial(n: u32, k: u32) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    let mut num = BigUint::from(1u32);
    for i in 0..k {
        num = num * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    num
}

/// Formats a nonzero value as scientific notation with the given number
/// of significant digits, rounding half away from zero on the digits.
pub fn to_scientific(value: &BigUint, sig: usize) -> String {
    let digits = value.to_str_radix(10);
    let exp = digits.len() as i64 - 1;
    if digits == "0" {
        return "0".to_string();
    }
    let mut kept: Vec<u8> = digits
        .bytes()
        .take(sig)
        .map(|b| b - b'0')
        .collect();
    let round_up = digits.as_bytes().get(sig).map(|&b| b - b'0' >= 5).unwrap_or(false);
    let mut exp = exp;
    if round_up {
        let mut i = kept.len();
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exp += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let mut out = String::new();
    out.push((b'0' + kept[0]) as char);
    if kept.len() > 1 {
        out.push('.');
        for &d in &kept[1..] {
            out.push((b'0' + d) as char);
        }
    }
    out.push_str(&format!("e{exp}"));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_dimensions() {
        let r3 = cube_report(3).unwrap();
        assert_eq!((r3.p, r3.q, r3.genus, r3.r, r3.klee), (8, 12, 0, 6, false));
        let r4 = cube_report(4).unwrap();
        assert_eq!((r4.p, r4.q, r4.genus, r4.r, r4.klee), (16, 32, 1, 16, false));
        let r5 = cube_report(5).unwrap();
        assert_eq!((r5.p, r5.q, r5.genus, r5.r, r5.klee), (32, 80, 5, 40, true));
        let r2 = cube_report(2).unwrap();
        assert_eq!((r2.p, r2.q, r2.genus, r2.r, r2.klee), (4, 4, 0, 2, false));
    }

    #[test]
    fn dimension_below_two_rejected() {
        assert!(matches!(cube_report(1), Err(CubeError::DimensionTooSmall(1))));
    }

    #[test]
    fn connection_pattern_counts() {
        assert_eq!(connection_patterns(4, 2), BigUint::from(11u32));
        assert_eq!(connection_patterns(3, 2), BigUint::from(4u32));
        assert_eq!(connection_patterns(4, 0), BigUint::from(16u32));
    }

    #[test]
    fn klee_count_hand_checked() {
        assert_eq!(klee_count(1, 1, 1, 1), BigUint::from(1u32));
        // C(3,2)*4 + C(3,3)*8 = 20
        assert_eq!(klee_count(3, 2, 3, 2), BigUint::from(20u32));
    }

    #[test]
    fn klee_count_monotone() {
        let base = klee_count(10, 4, 7, 3);
        assert!(klee_count(11, 4, 7, 3) > base);
        assert!(klee_count(10, 4, 8, 3) > base);
        assert!(klee_count(10, 4, 7, 4) > base);
    }

    #[test]
    fn scientific_rounding() {
        assert_eq!(to_scientific(&BigUint::from(14463u32), 3), "1.45e4");
        assert_eq!(to_scientific(&BigUint::from(999u32), 2), "1.0e3");
        assert_eq!(to_scientific(&BigUint::from(1049u32), 2), "1.0e3");
        assert_eq!(to_scientific(&BigUint::from(7u32), 3), "7e0");
    }
}
