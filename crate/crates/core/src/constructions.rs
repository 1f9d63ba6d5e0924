//! Generators for the extremal functions: `g0(k)`, its OR composition, and
//! the baseline OR / AND / constant tables.
//!
//! Every generator returns the dense table together with the certificates that
//! define it, so downstream checks can use them directly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::function::{full_mask, position_bit, BooleanFunction, Certificate, MAX_VARS};
use crate::measures::MeasureProfile;
use crate::ratio::Rational;

/// Which construction, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstructionSpec {
    /// `g0` on `2k` positions.
    G0 { k: usize },
    /// OR of `m` copies of `g0(r)` on disjoint position blocks.
    OrComposedG0 { m: usize, r: usize },
    Or { n: usize },
    And { n: usize },
}

impl ConstructionSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            ConstructionSpec::G0 { k } => {
                if !(2..=MAX_VARS / 2).contains(&k) {
                    return Err(Error::InvalidParameter(format!(
                        "g0 needs 2 <= k <= {}, got {k}",
                        MAX_VARS / 2
                    )));
                }
            }
            ConstructionSpec::OrComposedG0 { m, r } => {
                if m < 1 || r < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "composition needs m >= 1 and r >= 2, got m = {m}, r = {r}"
                    )));
                }
                if 2 * m * r > MAX_VARS {
                    return Err(Error::TooManyVariables {
                        n: 2 * m * r,
                        max: MAX_VARS,
                    });
                }
            }
            ConstructionSpec::Or { n } | ConstructionSpec::And { n } => {
                if n == 0 || n > MAX_VARS {
                    return Err(Error::InvalidParameter(format!(
                        "need 1 <= n <= {MAX_VARS}, got {n}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of input positions of the generated function.
    pub fn n(&self) -> usize {
        match *self {
            ConstructionSpec::G0 { k } => 2 * k,
            ConstructionSpec::OrComposedG0 { m, r } => 2 * m * r,
            ConstructionSpec::Or { n } | ConstructionSpec::And { n } => n,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub spec: ConstructionSpec,
    pub function: BooleanFunction,
    pub certificates: Vec<Certificate>,
}

/// The function that is 1 exactly on inputs satisfying some certificate.
pub fn or_of_certificates(n: usize, certificates: &[Certificate]) -> Result<BooleanFunction> {
    let mut f = BooleanFunction::constant(n, false)?;
    for c in certificates {
        if c.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: c.n(),
            });
        }
        let free = full_mask(n) & !c.assigned();
        let mut s = free;
        loop {
            f.set(c.values() | s, true);
            if s == 0 {
                break;
            }
            s = (s - 1) & free;
        }
    }
    Ok(f)
}

/// Certificates `c_0 .. c_{k-1}` of `g0(k)`, placed at positions
/// `offset + 1 ..= offset + 2k` of an `n`-position function.
fn g0_certificates_at(k: usize, n: usize, offset: usize) -> Vec<Certificate> {
    let odd = |j: usize| position_bit(offset + 2 * j + 1);
    let even = |j: usize| position_bit(offset + 2 * j + 2);
    (0..k)
        .map(|i| {
            let ones = odd(i) | even(i);
            let mut zeros = 0u32;
            for j in (0..k).filter(|&j| j != i) {
                zeros |= odd(j);
            }
            for step in 1..=k / 2 {
                zeros |= even((i + step) % k);
            }
            Certificate::from_masks(n, ones | zeros, ones)
        })
        .collect()
}

/// The `k` defining certificates of `g0(k)`; each has `floor(3k/2) + 1`
/// assigned positions.
pub fn g0_certificates(k: usize) -> Result<Vec<Certificate>> {
    ConstructionSpec::G0 { k }.validate()?;
    Ok(g0_certificates_at(k, 2 * k, 0))
}

pub fn g0(k: usize) -> Result<Construction> {
    let certificates = g0_certificates(k)?;
    let function = or_of_certificates(2 * k, &certificates)?;
    Ok(Construction {
        spec: ConstructionSpec::G0 { k },
        function,
        certificates,
    })
}

/// `OR_{i=1..m} g0(r)` with branch `i` on positions `2r(i-1)+1 ..= 2ri`.
pub fn or_compose_g0(m: usize, r: usize) -> Result<Construction> {
    let spec = ConstructionSpec::OrComposedG0 { m, r };
    spec.validate()?;
    let n = spec.n();
    let certificates: Vec<Certificate> = (0..m)
        .flat_map(|branch| g0_certificates_at(r, n, 2 * r * branch))
        .collect();
    let function = or_of_certificates(n, &certificates)?;
    Ok(Construction {
        spec,
        function,
        certificates,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedFunction {
    Or,
    And,
    Zero,
    One,
}

pub fn named(which: NamedFunction, n: usize) -> Result<BooleanFunction> {
    let all = full_mask(n);
    match which {
        NamedFunction::Or => BooleanFunction::from_fn(n, |i| i != 0),
        NamedFunction::And => BooleanFunction::from_fn(n, move |i| i == all),
        NamedFunction::Zero => BooleanFunction::constant(n, false),
        NamedFunction::One => BooleanFunction::constant(n, true),
    }
}

/// Builds any construction, including the natural minimal 1-certificates of
/// OR and AND.
pub fn build(spec: &ConstructionSpec) -> Result<Construction> {
    spec.validate()?;
    match *spec {
        ConstructionSpec::G0 { k } => g0(k),
        ConstructionSpec::OrComposedG0 { m, r } => or_compose_g0(m, r),
        ConstructionSpec::Or { n } => Ok(Construction {
            spec: *spec,
            function: named(NamedFunction::Or, n)?,
            certificates: (1..=n)
                .map(|p| Certificate::from_masks(n, position_bit(p), position_bit(p)))
                .collect(),
        }),
        ConstructionSpec::And { n } => Ok(Construction {
            spec: *spec,
            function: named(NamedFunction::And, n)?,
            certificates: vec![Certificate::from_masks(n, full_mask(n), full_mask(n))],
        }),
    }
}

/// Closed-form measures claimed for a construction; `None` means no claim.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClaimedProfile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs0: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs1: Option<u32>,
    #[serde(rename = "C0", skip_serializing_if = "Option::is_none")]
    pub c0: Option<u32>,
    #[serde(rename = "C1", skip_serializing_if = "Option::is_none")]
    pub c1: Option<u32>,
}

impl ClaimedProfile {
    /// Names of claimed fields that disagree with `measured`.
    pub fn mismatches(&self, measured: &MeasureProfile) -> Vec<&'static str> {
        let pairs = [
            ("s0", self.s0, measured.s0),
            ("s1", self.s1, measured.s1),
            ("bs0", self.bs0, measured.bs0),
            ("bs1", self.bs1, measured.bs1),
            ("C0", self.c0, measured.c0),
            ("C1", self.c1, measured.c1),
        ];
        pairs
            .into_iter()
            .filter(|(_, claim, got)| claim.is_some() && claim != got)
            .map(|(name, _, _)| name)
            .collect()
    }

    pub fn agrees_with(&self, measured: &MeasureProfile) -> bool {
        self.mismatches(measured).is_empty()
    }
}

fn g0_certificate_length(k: usize) -> u32 {
    (3 * k / 2 + 1) as u32
}

pub fn claimed_profile(spec: &ConstructionSpec) -> Result<ClaimedProfile> {
    spec.validate()?;
    Ok(match *spec {
        ConstructionSpec::G0 { k } => ClaimedProfile {
            s0: Some(1),
            s1: Some(g0_certificate_length(k)),
            bs0: Some(k as u32),
            c1: Some(g0_certificate_length(k)),
            ..Default::default()
        },
        ConstructionSpec::OrComposedG0 { m, r } => ClaimedProfile {
            s0: Some(m as u32),
            bs0: Some((m * r) as u32),
            c1: Some(g0_certificate_length(r)),
            ..Default::default()
        },
        ConstructionSpec::Or { n } => ClaimedProfile {
            s0: Some(n as u32),
            s1: Some(1),
            bs0: Some(n as u32),
            bs1: Some(1),
            c0: Some(n as u32),
            c1: Some(1),
        },
        ConstructionSpec::And { n } => ClaimedProfile {
            s0: Some(1),
            s1: Some(n as u32),
            bs0: Some(1),
            bs1: Some(n as u32),
            c0: Some(1),
            c1: Some(n as u32),
        },
    })
}

/// `(3/2) bs0 / s0 + 1/2`, the value `C1` takes when the lower bound is met
/// with two ones per certificate.
pub fn tight_c1(s0: u32, bs0: u32) -> Rational {
    Rational::new(3 * bs0 as i64 + s0 as i64, 2 * s0 as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{is_minimal_certificate, is_one_certificate, InputWord};

    fn strings(certs: &[Certificate]) -> Vec<String> {
        certs.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn g0_k2_certificates() {
        assert_eq!(strings(&g0_certificates(2).unwrap()), vec!["1100", "0011"]);
    }

    #[test]
    fn g0_k3_certificates() {
        assert_eq!(
            strings(&g0_certificates(3).unwrap()),
            vec!["11000*", "0*1100", "000*11"]
        );
    }

    #[test]
    fn g0_certificate_lengths() {
        for k in 2..=12 {
            for c in g0_certificates(k).unwrap() {
                assert_eq!(c.len() as u32, g0_certificate_length(k));
            }
        }
    }

    #[test]
    fn g0_range_checked() {
        assert!(g0(1).is_err());
        assert!(g0(13).is_err());
        assert_eq!(g0(12).unwrap().function.n(), 24);
    }

    #[test]
    fn g0_evaluates_on_c0() {
        let f = g0(2).unwrap().function;
        assert!(f.evaluate("1100".parse::<InputWord>().unwrap()).unwrap());
        assert!(!f.evaluate("1000".parse::<InputWord>().unwrap()).unwrap());
    }

    #[test]
    fn g0_k3_certificate_is_one_certificate() {
        let f = g0(3).unwrap().function;
        assert!(is_one_certificate(&f, &"11000*".parse().unwrap()).unwrap());
    }

    #[test]
    fn g0_certificates_are_minimal() {
        for k in 2..=6 {
            let g = g0(k).unwrap();
            for c in &g.certificates {
                assert!(is_minimal_certificate(&g.function, c).unwrap(), "k={k} {c}");
            }
        }
    }

    #[test]
    fn single_branch_composition_is_g0() {
        for k in 2..=5 {
            assert_eq!(or_compose_g0(1, k).unwrap().function, g0(k).unwrap().function);
        }
    }

    #[test]
    fn composition_size_checked() {
        assert!(or_compose_g0(3, 5).is_err());
        assert!(or_compose_g0(0, 3).is_err());
        assert!(or_compose_g0(2, 1).is_err());
        assert_eq!(or_compose_g0(4, 3).unwrap().function.n(), 24);
    }

    #[test]
    fn named_tables() {
        assert_eq!(named(NamedFunction::Or, 2).unwrap().to_hex(), "e");
        assert_eq!(named(NamedFunction::And, 2).unwrap().to_hex(), "8");
        assert_eq!(named(NamedFunction::Zero, 2).unwrap().to_hex(), "0");
        assert_eq!(named(NamedFunction::One, 2).unwrap().to_hex(), "f");
    }

    #[test]
    fn claimed_closed_forms() {
        assert_eq!(claimed_profile(&ConstructionSpec::G0 { k: 4 }).unwrap().c1, Some(7));
        assert_eq!(claimed_profile(&ConstructionSpec::G0 { k: 5 }).unwrap().c1, Some(8));
        let c = claimed_profile(&ConstructionSpec::OrComposedG0 { m: 2, r: 2 }).unwrap();
        assert_eq!((c.s0, c.bs0, c.c1), (Some(2), Some(4), Some(4)));
    }

    #[test]
    fn tight_value_for_odd_branch_size() {
        assert_eq!(tight_c1(1, 3), Rational::integer(5));
        assert_eq!(tight_c1(2, 6), Rational::integer(5));
        // even r: the tight value is not an integer, so C1 cannot meet it
        assert_eq!(tight_c1(1, 2), Rational::new(7, 2));
    }
}
