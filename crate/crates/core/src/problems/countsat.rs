use crate::error::{invalid, Result};

use super::{check_len, Problem};

/// Number of satisfied clauses among all 3-variable Horn-style clauses of
/// the COUNTSAT instance with `n` variables, `s` of them true:
/// `s + n(n-1)(n-2) - 2(n-2)·C(s,2) + 6·C(s,3)`.
pub fn countsat_value(n: u64, s: u64) -> i128 {
    let (n, s) = (n as i128, s as i128);
    let c2 = s * (s - 1) / 2;
    let c3 = s * (s - 1) * (s - 2) / 6;
    s + n * (n - 1) * (n - 2) - 2 * (n - 2) * c2 + 6 * c3
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSat {
    n: usize,
}

impl CountSat {
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(invalid("COUNTSAT needs at least 3 variables"));
        }
        Ok(CountSat { n })
    }
}

impl Problem for CountSat {
    fn bit_count(&self) -> usize {
        self.n
    }

    fn evaluate(&self, bits: &[bool]) -> Result<f64> {
        check_len(bits, self.n)?;
        let s = bits.iter().filter(|b| **b).count() as u64;
        Ok(countsat_value(self.n as u64, s) as f64)
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(countsat_value(self.n as u64, self.n as u64) as f64)
    }

    fn name(&self) -> String {
        format!("countsat-n{}", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn closed_form_values() {
        assert_eq!(countsat_value(20, 20), 6860);
        assert_eq!(countsat_value(20, 0), 6840);
        assert_eq!(countsat_value(1000, 1000), 997_003_000);
        // The n = 20 polynomial s + 6840 - 18s(s-1) + s(s-1)(s-2).
        for s in 0..=20i128 {
            let direct = s + 6840 - 18 * s * (s - 1) + s * (s - 1) * (s - 2);
            assert_eq!(countsat_value(20, s as u64), direct);
        }
    }

    #[test]
    fn unique_maximizer_at_all_ones() {
        for n in (20..=1000).step_by(10) {
            let best = countsat_value(n, n);
            for s in 0..n {
                assert!(countsat_value(n, s) < best, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn evaluate_matches_closed_form() {
        let p = CountSat::new(20).unwrap();
        assert_eq!(p.evaluate(&[true; 20]).unwrap(), 6860.0);
        assert_eq!(p.known_optimum(), Some(6860.0));
        assert!(CountSat::new(2).is_err());
    }

    proptest! {
        #[test]
        fn depends_on_ones_count_only(
            bits in proptest::collection::vec(any::<bool>(), 40).prop_shuffle(),
        ) {
            let p = CountSat::new(40).unwrap();
            let s = bits.iter().filter(|b| **b).count() as u64;
            let mut sorted = bits.clone();
            sorted.sort();
            prop_assert_eq!(p.evaluate(&bits).unwrap(), p.evaluate(&sorted).unwrap());
            prop_assert_eq!(p.evaluate(&bits).unwrap(), countsat_value(40, s) as f64);
        }
    }
}
