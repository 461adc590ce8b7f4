//! Sampled radial wavefunctions R(r) on a uniform grid open at the origin.

use num_complex::Complex64;

use crate::error::{ensure, Error, Result};
use crate::special::{derivative, integrate_power_weighted};
use crate::trial::TrialState;

/// Minimum number of samples accepted for a profile.
pub const MIN_PROFILE_POINTS: usize = 128;

/// Default sample count for profiles built from a trial state.
pub const DEFAULT_PROFILE_POINTS: usize = 16_384;

/// R(r) sampled at r_i = (i+1)·dr, i = 0..n, together with its angular
/// quantum number. The wavefunction is R(r)·e^{i l_z φ}/√(2π).
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    dr: f64,
    values: Vec<Complex64>,
    l_z: i32,
    norm_factor: f64,
}

/// Raw radial integrals of a profile, before any physical prefactors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RadialIntegrals {
    /// ∫|R|² r dr
    pub norm: f64,
    /// ∫|R|² r³ dr
    pub r2: f64,
    /// ∫|R|² r⁻¹ dr
    pub inv_r2: f64,
    /// ∫|R'|² r dr
    pub grad: f64,
    /// Im ∫ R* R' r² dr
    pub dilation: f64,
}

impl RadialProfile {
    pub fn new(dr: f64, values: Vec<Complex64>, l_z: i32) -> Result<RadialProfile> {
        ensure(dr > 0.0 && dr.is_finite(), || format!("grid spacing must be > 0, got {dr}"))?;
        ensure(values.len() >= MIN_PROFILE_POINTS, || {
            format!(
                "profile needs at least {MIN_PROFILE_POINTS} samples, got {}",
                values.len()
            )
        })?;
        ensure(values.iter().all(|v| v.re.is_finite() && v.im.is_finite()), || {
            "profile contains non-finite samples".to_string()
        })?;
        Ok(RadialProfile {
            dr,
            values,
            l_z,
            norm_factor: 1.0,
        })
    }

    /// Samples `f` at r_i = i·r_max/n, i = 1..=n.
    pub fn from_fn(
        n: usize,
        r_max: f64,
        l_z: i32,
        f: impl Fn(f64) -> Complex64,
    ) -> Result<RadialProfile> {
        ensure(r_max > 0.0, || format!("r_max must be > 0, got {r_max}"))?;
        let dr = r_max / n as f64;
        let values = (1..=n).map(|i| f(i as f64 * dr)).collect();
        RadialProfile::new(dr, values, l_z)
    }

    /// ψ_s sampled on n points out to r_max.
    pub fn from_trial(ts: &TrialState, n: usize, r_max: f64) -> Result<RadialProfile> {
        ts.validate()?;
        RadialProfile::from_fn(n, r_max, ts.l_z, |r| Complex64::new(ts.radial(r), 0.0))
    }

    /// ψ_s on the default grid: r_max = 12/√β, 16384 points.
    pub fn from_trial_default(ts: &TrialState) -> Result<RadialProfile> {
        RadialProfile::from_trial(ts, DEFAULT_PROFILE_POINTS, 12.0 / ts.beta.sqrt())
    }

    /// Multiplies by e^{i k r²}; this shifts ⟨r·p + p·r⟩ by 4ħk⟨r²⟩ and
    /// leaves |R| unchanged.
    pub fn chirped(mut self, k: f64) -> RadialProfile {
        let dr = self.dr;
        for (i, v) in self.values.iter_mut().enumerate() {
            let r = (i + 1) as f64 * dr;
            *v *= Complex64::from_polar(1.0, k * r * r);
        }
        self
    }

    pub fn dr(&self) -> f64 {
        self.dr
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn r_max(&self) -> f64 {
        self.dr * self.values.len() as f64
    }

    pub fn r(&self, i: usize) -> f64 {
        (i + 1) as f64 * self.dr
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn l_z(&self) -> i32 {
        self.l_z
    }

    /// Factor applied by [`RadialProfile::normalized`] (1 if never renormalized).
    pub fn norm_factor(&self) -> f64 {
        self.norm_factor
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Exponent p of the leading power law R ~ r^p near the origin.
    ///
    /// Fitted from |R| at h, 2h and 4h with the O(r²) correction of an
    /// even smooth factor eliminated.
    pub fn origin_exponent(&self) -> f64 {
        let m = |i: usize| self.values[i].norm();
        let (a, b, c) = (m(0), m(1), m(3));
        if a == 0.0 || b == 0.0 || c == 0.0 {
            // vanishes identically next to the origin; any positive exponent works
            return 1.0;
        }
        let (l1, l2, l4) = (a.ln(), b.ln(), c.ln());
        let p = (4.0 * (l2 - l1) - (l4 - l2)) / (3.0 * std::f64::consts::LN_2);
        p.min(20.0)
    }

    /// Probability ∫|R|² r dr over the outer 5% of the grid.
    pub fn tail_mass(&self) -> f64 {
        let n = self.values.len();
        let start = n - n.div_ceil(20);
        self.values[start..]
            .iter()
            .enumerate()
            .map(|(k, v)| v.norm_sqr() * self.r(start + k) * self.dr)
            .sum()
    }

    pub(crate) fn integrals(&self) -> Result<RadialIntegrals> {
        let p = self.origin_exponent();
        if p <= 1e-6 {
            return Err(Error::SingularIntegral(format!(
                "profile does not vanish at the origin (R ~ r^{p:.3e}); <1/r^2> diverges"
            )));
        }
        let h = self.dr;
        let g: Vec<Complex64> = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| v / self.r(i).powf(p))
            .collect();
        let dg = derivative(&g, h);
        let dens: Vec<f64> = g.iter().map(|v| v.norm_sqr()).collect();
        let grad: Vec<f64> = g
            .iter()
            .zip(&dg)
            .enumerate()
            .map(|(i, (gi, dgi))| (gi * p + dgi * self.r(i)).norm_sqr())
            .collect();
        let dil: Vec<f64> = g
            .iter()
            .zip(&dg)
            .map(|(gi, dgi)| (gi.conj() * dgi).im)
            .collect();
        Ok(RadialIntegrals {
            norm: integrate_power_weighted(2.0 * p + 1.0, &dens, h),
            r2: integrate_power_weighted(2.0 * p + 3.0, &dens, h),
            inv_r2: integrate_power_weighted(2.0 * p - 1.0, &dens, h),
            grad: integrate_power_weighted(2.0 * p - 1.0, &grad, h),
            dilation: if self.is_real() {
                0.0
            } else {
                integrate_power_weighted(2.0 * p + 2.0, &dil, h)
            },
        })
    }

    /// ∫|R|² r dr.
    pub fn norm(&self) -> Result<f64> {
        Ok(self.integrals()?.norm)
    }

    /// Rescales to unit norm and records the factor applied.
    pub fn normalized(mut self) -> Result<RadialProfile> {
        let norm = self.norm()?;
        ensure(norm > 0.0, || "profile is identically zero".to_string())?;
        let factor = norm.sqrt().recip();
        for v in &mut self.values {
            *v *= factor;
        }
        self.norm_factor *= factor;
        Ok(self)
    }

    /// Reads a profile from text with columns `r  Re R  [Im R]`.
    ///
    /// Lines starting with `#` are comments; the first other line is a
    /// header if it is not numeric. Columns may be separated by whitespace
    /// or commas. Radii must be r_i = i·h, optionally starting with a row at
    /// r = 0 whose value must be zero. The result is renormalized.
    pub fn parse(text: &str, l_z: i32) -> Result<RadialProfile> {
        let mut rows: Vec<(f64, Complex64)> = Vec::new();
        let mut seen_header = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let nums: std::result::Result<Vec<f64>, _> = cols.iter().map(|c| c.parse::<f64>()).collect();
            let nums = match nums {
                Ok(v) => v,
                Err(_) if !seen_header && rows.is_empty() => {
                    seen_header = true;
                    continue;
                }
                Err(_) => {
                    return Err(Error::Parse(format!("line {}: non-numeric row", lineno + 1)));
                }
            };
            let value = match nums.as_slice() {
                [r, re] => (*r, Complex64::new(*re, 0.0)),
                [r, re, im] => (*r, Complex64::new(*re, *im)),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected 2 or 3 columns, got {}",
                        lineno + 1,
                        nums.len()
                    )))
                }
            };
            rows.push(value);
        }
        if rows.first().is_some_and(|(r, _)| *r == 0.0) {
            let (_, v0) = rows.remove(0);
            if v0.norm() != 0.0 {
                return Err(Error::SingularIntegral(format!(
                    "R(0) = {v0} != 0; <1/r^2> diverges"
                )));
            }
        }
        ensure(rows.len() >= MIN_PROFILE_POINTS, || {
            format!("profile needs at least {MIN_PROFILE_POINTS} rows, got {}", rows.len())
        })?;
        let h = rows[0].0;
        ensure(h > 0.0, || format!("radii must be positive, first is {h}"))?;
        for (i, (r, _)) in rows.iter().enumerate() {
            let expected = (i + 1) as f64 * h;
            ensure((r - expected).abs() <= 1e-6 * h, || {
                format!("radii must be uniform r_i = i*h with h = {h}; row {} has r = {r}", i + 1)
            })?;
        }
        RadialProfile::new(h, rows.into_iter().map(|(_, v)| v).collect(), l_z)?.normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_exponent_of_trial_state() {
        for s in [0.5, 1.0, 2.0, 3.7] {
            let ts = TrialState::new(s, 1.0, 0).unwrap();
            let p = RadialProfile::from_trial(&ts, 4096, 12.0).unwrap();
            assert!((p.origin_exponent() - s).abs() < 1e-8, "s={s}: {}", p.origin_exponent());
        }
    }

    #[test]
    fn parse_roundtrip_and_renormalize() {
        let ts = TrialState::new(1.0, 1.0, 0).unwrap();
        let mut text = String::from("r,R\n0,0\n");
        let h = 12.0 / 2000.0;
        for i in 1..=2000 {
            let r = i as f64 * h;
            text.push_str(&format!("{r},{}\n", 3.0 * ts.radial(r)));
        }
        let p = RadialProfile::parse(&text, 0).unwrap();
        assert!((p.norm_factor() - 1.0 / 3.0).abs() < 1e-8);
        assert!((p.norm().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parse_rejects_bad_input() {
        let mut text = String::from("r R\n0 1\n");
        for i in 1..100 {
            text.push_str(&format!("{} {}\n", i as f64 * 0.1, 1.0));
        }
        assert!(matches!(RadialProfile::parse(&text, 0), Err(Error::SingularIntegral(_))));
        let mut text = String::from("r R\n");
        for i in 1..100 {
            text.push_str(&format!("{} {}\n", (i * i) as f64 * 0.1, 1.0));
        }
        assert!(matches!(RadialProfile::parse(&text, 0), Err(Error::Validation(_))));
        assert!(matches!(
            RadialProfile::parse("r R\n0.1 1\nfoo bar\n", 0),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn nonvanishing_profile_is_singular() {
        let p = RadialProfile::from_fn(512, 10.0, 0, |r| Complex64::new((-r * r).exp(), 0.0)).unwrap();
        assert!(matches!(p.norm(), Err(Error::SingularIntegral(_))));
    }
}
