//! Covariance matrices of the three source families, built from their
//! Bloch-Messiah decompositions: independent single-mode squeezers followed by
//! a passive mixer `U_B`.

use std::f64::consts::{FRAC_PI_2, SQRT_2};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::family::Family;
use crate::gaussian::CovarianceMatrix;
use crate::scalar::Real;

pub type Coupling = Complex<f64>;

pub const UNITARITY_TOL: f64 = 1e-10;

/// Passive unitary `U_B = u_re + i·u_im` and signed squeeze parameters.
///
/// Positive `r` squeezes Y: `⟨δX²⟩ = e^{2r}`, `⟨δY²⟩ = e^{−2r}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochMessiahSpec<T: Real = f64> {
    u_re: DMatrix<T>,
    u_im: DMatrix<T>,
    squeeze: Vec<T>,
}

impl<T: Real> BlochMessiahSpec<T> {
    pub fn new(u_re: DMatrix<T>, u_im: DMatrix<T>, squeeze: Vec<T>) -> Result<Self> {
        let n = squeeze.len();
        if n == 0 {
            return invalid("Bloch-Messiah spec needs at least one mode");
        }
        if u_re.shape() != (n, n) || u_im.shape() != (n, n) {
            return invalid(format!(
                "unitary must be {n}×{n}, got {:?} and {:?}",
                u_re.shape(),
                u_im.shape()
            ));
        }
        Ok(Self { u_re, u_im, squeeze })
    }

    pub fn real(u: DMatrix<T>, squeeze: Vec<T>) -> Result<Self> {
        let (r, c) = u.shape();
        Self::new(u, DMatrix::zeros(r, c), squeeze)
    }

    pub fn n_modes(&self) -> usize {
        self.squeeze.len()
    }

    pub fn u_re(&self) -> &DMatrix<T> {
        &self.u_re
    }

    pub fn u_im(&self) -> &DMatrix<T> {
        &self.u_im
    }

    pub fn squeeze(&self) -> &[T] {
        &self.squeeze
    }

    /// Negates one squeeze parameter (used to inject faults in verification runs).
    pub fn flip_squeeze(&mut self, k: usize) {
        self.squeeze[k] = -self.squeeze[k];
    }

    /// `max |U U† − I|`.
    pub fn unitarity_defect(&self) -> f64 {
        let (r, i) = (&self.u_re, &self.u_im);
        let re = r * r.transpose() + i * i.transpose();
        let im = i * r.transpose() - r * i.transpose();
        let n = self.n_modes();
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in 0..n {
                let target = if a == b { T::one() } else { T::zero() };
                worst = worst.max((re[(a, b)] - target).abs().to_f64());
                worst = worst.max(im[(a, b)].abs().to_f64());
            }
        }
        worst
    }

    /// Real symplectic form of the passive transformation, `[[Re U, −Im U], [Im U, Re U]]`.
    pub fn symplectic(&self) -> DMatrix<T> {
        let n = self.n_modes();
        DMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => self.u_re[(i, j)],
            (true, false) => -self.u_im[(i, j - n)],
            (false, true) => self.u_im[(i - n, j)],
            (false, false) => self.u_re[(i - n, j - n)],
        })
    }
}

/// `V = S_B · diag(e^{2r}, e^{−2r}) · S_Bᵀ`.
pub fn covariance_from_bm<T: Real>(spec: &BlochMessiahSpec<T>) -> Result<CovarianceMatrix<T>> {
    let defect = spec.unitarity_defect();
    if !(defect <= UNITARITY_TOL) {
        return Err(Error::NonUnitary { defect });
    }
    if spec.squeeze.iter().any(|r| !r.is_finite()) {
        return invalid("squeeze parameters must be finite");
    }
    let n = spec.n_modes();
    let two = T::from_f64(2.0);
    let s = spec.symplectic();
    let mut scaled = s.clone();
    for (k, &r) in spec.squeeze.iter().enumerate() {
        let (grow, shrink) = ((two * r).exp(), (-(two * r)).exp());
        for i in 0..2 * n {
            scaled[(i, k)] *= grow;
            scaled[(i, n + k)] *= shrink;
        }
    }
    Ok(CovarianceMatrix::from_trusted(&scaled * s.transpose()))
}

/// A factory output: the covariance together with the decomposition it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState<T: Real = f64> {
    pub covariance: CovarianceMatrix<T>,
    pub bloch_messiah: BlochMessiahSpec<T>,
}

fn modulus<T: Real>(g: Coupling) -> T {
    let (re, im) = (T::from_f64(g.re), T::from_f64(g.im));
    (re * re + im * im).sqrt()
}

fn check_pair(g1: Coupling, g2: Coupling, z: f64) -> Result<()> {
    for g in [g1, g2] {
        if !(g.re.is_finite() && g.im.is_finite()) {
            return invalid("couplings must be finite");
        }
    }
    if g1.norm_sqr() == 0.0 && g2.norm_sqr() == 0.0 {
        return invalid("at least one coupling must be nonzero");
    }
    check_length(z)
}

fn check_length(z: f64) -> Result<()> {
    if !(z.is_finite() && z >= 0.0) {
        return invalid(format!("propagation length must be finite and ≥ 0, got {z}"));
    }
    Ok(())
}

/// `g₁ = 1/√(1+x²)`, `g₂ = x/√(1+x²)`, so that `|g₂/g₁| = x` and `ḡ = 1`.
fn unit_pair(x: f64) -> Result<(Coupling, Coupling)> {
    if !(x.is_finite() && x >= 0.0) {
        return invalid(format!("coupling ratio must be finite and ≥ 0, got {x}"));
    }
    let norm = x.hypot(1.0);
    Ok((Coupling::new(1.0 / norm, 0.0), Coupling::new(x / norm, 0.0)))
}

fn ratio(g1: Coupling, g2: Coupling) -> f64 {
    let a1 = g1.norm();
    if a1 == 0.0 {
        f64::INFINITY
    } else {
        g2.norm() / a1
    }
}

/// Three modes: process `g₁` couples modes 0,1 and `g₂` couples modes 0,2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripartiteParams {
    g1: Coupling,
    g2: Coupling,
    z: f64,
}

impl TripartiteParams {
    pub fn new(g1: Coupling, g2: Coupling, z: f64) -> Result<Self> {
        check_pair(g1, g2, z)?;
        Ok(Self { g1, g2, z })
    }

    /// Real couplings with `|g₂/g₁| = x` and `ḡ = 1`, evolved to `ḡz = gbar_z`.
    pub fn from_ratio(x: f64, gbar_z: f64) -> Result<Self> {
        let (g1, g2) = unit_pair(x)?;
        Self::new(g1, g2, gbar_z)
    }

    /// `g₁ = cos θ`, `g₂ = sin θ`.
    pub fn from_theta(theta: f64, gbar_z: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return invalid(format!("θ must lie in [0, π/2], got {theta}"));
        }
        Self::new(Coupling::new(theta.cos(), 0.0), Coupling::new(theta.sin(), 0.0), gbar_z)
    }

    pub fn g1(&self) -> Coupling {
        self.g1
    }

    pub fn g2(&self) -> Coupling {
        self.g2
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn theta(&self) -> f64 {
        self.g2.norm().atan2(self.g1.norm())
    }

    pub fn g_bar(&self) -> f64 {
        self.g1.norm().hypot(self.g2.norm())
    }

    pub fn gbar_z(&self) -> f64 {
        self.g_bar() * self.z
    }

    pub fn ratio(&self) -> f64 {
        ratio(self.g1, self.g2)
    }

    pub fn bloch_messiah<T: Real>(&self) -> BlochMessiahSpec<T> {
        let a1 = modulus::<T>(self.g1);
        let a2 = modulus::<T>(self.g2);
        let gbar = (a1 * a1 + a2 * a2).sqrt();
        let (c, s) = (a1 / gbar, a2 / gbar);
        let h = T::one() / T::from_f64(2.0).sqrt();
        let z = T::zero();
        #[rustfmt::skip]
        let u = DMatrix::from_row_slice(3, 3, &[
            h, h, z,
            h * c, -(h * c), -s,
            h * s, -(h * s), c,
        ]);
        let r = gbar * T::from_f64(self.z);
        BlochMessiahSpec::real(u, vec![r, -r, T::zero()]).expect("3×3 shape")
    }
}

/// Four modes in a chain. Storage indices 0..3 hold `b_s, b_i, c_s, c_i`:
/// `g₁` couples `b_s b_i`, `g₂` couples `b_i c_s` and `b_s c_i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourModeLinearParams {
    g1: Coupling,
    g2: Coupling,
    z: f64,
}

impl FourModeLinearParams {
    pub fn new(g1: Coupling, g2: Coupling, z: f64) -> Result<Self> {
        check_pair(g1, g2, z)?;
        Ok(Self { g1, g2, z })
    }

    /// Real couplings with `|g₂/g₁| = x` and `ḡ = 1`, evolved to `ḡz = gbar_z`.
    pub fn from_ratio(x: f64, gbar_z: f64) -> Result<Self> {
        let (g1, g2) = unit_pair(x)?;
        Self::new(g1, g2, gbar_z)
    }

    pub fn g1(&self) -> Coupling {
        self.g1
    }

    pub fn g2(&self) -> Coupling {
        self.g2
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn x(&self) -> f64 {
        ratio(self.g1, self.g2)
    }

    pub fn g_bar(&self) -> f64 {
        self.g1.norm().hypot(self.g2.norm())
    }

    pub fn gbar_z(&self) -> f64 {
        self.g_bar() * self.z
    }

    /// `(Λ_S, Λ_D) = ((√(|g₁|²+4|g₂|²) ± |g₁|)/2`, with Λ_D in cancellation-free form.
    pub fn lambdas<T: Real>(&self) -> (T, T) {
        let a1 = modulus::<T>(self.g1);
        let a2 = modulus::<T>(self.g2);
        let two = T::from_f64(2.0);
        let root = (a1 * a1 + two * two * a2 * a2).sqrt();
        let ls = (root + a1) / two;
        let ld = two * a2 * a2 / (root + a1);
        (ls, ld)
    }

    pub fn lambda_s(&self) -> f64 {
        self.lambdas::<f64>().0
    }

    pub fn lambda_d(&self) -> f64 {
        self.lambdas::<f64>().1
    }

    /// `(cos γ, sin γ)` with `tan²γ = Λ_D/Λ_S`.
    pub fn gamma_cs<T: Real>(&self) -> (T, T) {
        let (ls, ld) = self.lambdas::<T>();
        let sum = ls + ld;
        ((ls / sum).sqrt(), (ld / sum).sqrt())
    }

    pub fn gamma(&self) -> f64 {
        let (c, s) = self.gamma_cs::<f64>();
        s.atan2(c)
    }

    /// `(r_S, r_D) = (Λ_S z, Λ_D z)`.
    pub fn squeezes(&self) -> (f64, f64) {
        (self.lambda_s() * self.z, self.lambda_d() * self.z)
    }

    pub fn bloch_messiah<T: Real>(&self) -> BlochMessiahSpec<T> {
        let (c, s) = self.gamma_cs::<T>();
        let h = T::one() / T::from_f64(2.0).sqrt();
        let z = T::zero();
        #[rustfmt::skip]
        let rot = DMatrix::from_row_slice(4, 4, &[
            c, z, -s, z,
            z, c, z, -s,
            s, z, c, z,
            z, s, z, c,
        ]);
        #[rustfmt::skip]
        let mix = DMatrix::from_row_slice(4, 4, &[
            h, h, z, z,
            h, -h, z, z,
            z, z, h, h,
            z, z, h, -h,
        ]);
        let (ls, ld) = self.lambdas::<T>();
        let zz = T::from_f64(self.z);
        let (rs, rd) = (ls * zz, ld * zz);
        BlochMessiahSpec::real(&rot * &mix, vec![rs, -rs, -rd, rd]).expect("4×4 shape")
    }
}

/// Four modes on a square with `|g₁| = |g₂| = g_mag` and pump phase offset
/// `φ₋`, i.e. `g₁ = g e^{iφ₋}`, `g₂ = g e^{−iφ₋}`. Every mode is shared by two
/// processes: `g₁` on `(0,1)` and `(2,3)`, `g₁ + g₂` on `(1,2)` and `(0,3)`
/// after local phase rotations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourModeSquareParams {
    g_mag: f64,
    phi_minus: f64,
    z: f64,
}

/// Maps any phase offset onto `[0, π/2]`; Λ_{S,D} only depend on `|cos φ₋|`.
fn reduce_phase(phi: f64) -> f64 {
    if (0.0..=FRAC_PI_2).contains(&phi) {
        phi
    } else {
        let reduced = phi.cos().abs().min(1.0).acos();
        log::warn!("φ₋ = {phi} lies outside [0, π/2]; using the equivalent {reduced}");
        reduced
    }
}

impl FourModeSquareParams {
    pub fn new(g_mag: f64, phi_minus: f64, z: f64) -> Result<Self> {
        if !(g_mag.is_finite() && g_mag > 0.0) {
            return invalid(format!("g_mag must be finite and > 0, got {g_mag}"));
        }
        if !phi_minus.is_finite() {
            return invalid("φ₋ must be finite");
        }
        check_length(z)?;
        Ok(Self {
            g_mag,
            phi_minus: reduce_phase(phi_minus),
            z,
        })
    }

    /// Only the symmetric case `|g₁| = |g₂|` is supported.
    pub fn from_couplings(g1: Coupling, g2: Coupling, z: f64) -> Result<Self> {
        check_pair(g1, g2, z)?;
        let (a1, a2) = (g1.norm(), g2.norm());
        if (a1 - a2).abs() > 1e-12 * a1.max(a2) {
            return invalid(format!(
                "square state requires |g1| = |g2| (got {a1} and {a2}); asymmetric couplings are not supported"
            ));
        }
        Self::new(0.5 * (a1 + a2), 0.5 * (g1.arg() - g2.arg()), z)
    }

    pub fn g_mag(&self) -> f64 {
        self.g_mag
    }

    pub fn phi_minus(&self) -> f64 {
        self.phi_minus
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// `(g e^{iφ₋}, g e^{−iφ₋})`.
    pub fn couplings(&self) -> (Coupling, Coupling) {
        (
            Coupling::from_polar(self.g_mag, self.phi_minus),
            Coupling::from_polar(self.g_mag, -self.phi_minus),
        )
    }

    pub fn g_bar(&self) -> f64 {
        SQRT_2 * self.g_mag
    }

    /// `(Λ_S, Λ_D) = g(2cos φ₋ ± 1)`; Λ_D is negative beyond φ₋ = π/3.
    pub fn lambdas<T: Real>(&self) -> (T, T) {
        let g = T::from_f64(self.g_mag);
        let two_cos = T::from_f64(2.0 * self.phi_minus.cos());
        (g * (two_cos + T::one()), g * (two_cos - T::one()))
    }

    pub fn lambda_s(&self) -> f64 {
        self.lambdas::<f64>().0
    }

    pub fn lambda_d(&self) -> f64 {
        self.lambdas::<f64>().1
    }

    pub fn squeezes(&self) -> (f64, f64) {
        (self.lambda_s() * self.z, self.lambda_d() * self.z)
    }

    pub fn bloch_messiah<T: Real>(&self) -> BlochMessiahSpec<T> {
        let h = T::from_f64(0.5);
        #[rustfmt::skip]
        let u = DMatrix::from_row_slice(4, 4, &[
            h, h, h, h,
            h, -h, h, -h,
            h, h, -h, -h,
            h, -h, -h, h,
        ]);
        let (ls, ld) = self.lambdas::<T>();
        let zz = T::from_f64(self.z);
        let (rs, rd) = (ls * zz, ld * zz);
        BlochMessiahSpec::real(u, vec![rs, -rs, -rd, rd]).expect("4×4 shape")
    }
}

fn build<T: Real>(bm: BlochMessiahSpec<T>) -> Result<GaussianState<T>> {
    Ok(GaussianState {
        covariance: covariance_from_bm(&bm)?,
        bloch_messiah: bm,
    })
}

pub fn tripartite_state<T: Real>(p: &TripartiteParams) -> Result<GaussianState<T>> {
    build(p.bloch_messiah())
}

pub fn four_mode_linear_state<T: Real>(p: &FourModeLinearParams) -> Result<GaussianState<T>> {
    build(p.bloch_messiah())
}

pub fn four_mode_square_state<T: Real>(p: &FourModeSquareParams) -> Result<GaussianState<T>> {
    build(p.bloch_messiah())
}

/// A fully specified state of one of the three families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateSpecJson", into = "StateSpecJson")]
pub enum StateSpec {
    Tri(TripartiteParams),
    Lin4(FourModeLinearParams),
    Sq4(FourModeSquareParams),
}

impl StateSpec {
    pub fn family(&self) -> Family {
        match self {
            StateSpec::Tri(_) => Family::Tri,
            StateSpec::Lin4(_) => Family::Lin4,
            StateSpec::Sq4(_) => Family::Sq4,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.family().n_modes()
    }

    pub fn z(&self) -> f64 {
        match self {
            StateSpec::Tri(p) => p.z(),
            StateSpec::Lin4(p) => p.z(),
            StateSpec::Sq4(p) => p.z(),
        }
    }

    /// The complex couplings `(g₁, g₂)` before local phases are stripped.
    pub fn couplings(&self) -> (Coupling, Coupling) {
        match self {
            StateSpec::Tri(p) => (p.g1(), p.g2()),
            StateSpec::Lin4(p) => (p.g1(), p.g2()),
            StateSpec::Sq4(p) => p.couplings(),
        }
    }

    pub fn bloch_messiah<T: Real>(&self) -> BlochMessiahSpec<T> {
        match self {
            StateSpec::Tri(p) => p.bloch_messiah(),
            StateSpec::Lin4(p) => p.bloch_messiah(),
            StateSpec::Sq4(p) => p.bloch_messiah(),
        }
    }

    pub fn build<T: Real>(&self) -> Result<GaussianState<T>> {
        build(self.bloch_messiah())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("state spec: {e}")))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("plain data serialises")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexJson {
    re: f64,
    #[serde(default)]
    im: f64,
}

impl From<ComplexJson> for Coupling {
    fn from(c: ComplexJson) -> Self {
        Coupling::new(c.re, c.im)
    }
}

impl From<Coupling> for ComplexJson {
    fn from(c: Coupling) -> Self {
        ComplexJson { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSpecJson {
    family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g1: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g2: Option<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    g_mag: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi_minus: Option<f64>,
    z: f64,
}

impl TryFrom<StateSpecJson> for StateSpec {
    type Error = Error;

    fn try_from(j: StateSpecJson) -> Result<Self> {
        let pair = |j: &StateSpecJson| -> Result<(Coupling, Coupling)> {
            match (j.g1, j.g2) {
                (Some(a), Some(b)) => Ok((a.into(), b.into())),
                _ => invalid(format!("family {} needs both g1 and g2", j.family)),
            }
        };
        match j.family {
            Family::Tri | Family::Lin4 => {
                if j.g_mag.is_some() || j.phi_minus.is_some() {
                    return invalid(format!("g_mag/phi_minus only apply to sq4, not {}", j.family));
                }
                let (g1, g2) = pair(&j)?;
                if j.family == Family::Tri {
                    Ok(StateSpec::Tri(TripartiteParams::new(g1, g2, j.z)?))
                } else {
                    Ok(StateSpec::Lin4(FourModeLinearParams::new(g1, g2, j.z)?))
                }
            }
            Family::Sq4 => match (j.g_mag, j.phi_minus, j.g1.is_some() || j.g2.is_some()) {
                (Some(g), Some(phi), false) => Ok(StateSpec::Sq4(FourModeSquareParams::new(g, phi, j.z)?)),
                (None, None, true) => {
                    let (g1, g2) = pair(&j)?;
                    Ok(StateSpec::Sq4(FourModeSquareParams::from_couplings(g1, g2, j.z)?))
                }
                _ => invalid("sq4 needs either {g_mag, phi_minus} or {g1, g2}"),
            },
        }
    }
}

impl From<StateSpec> for StateSpecJson {
    fn from(s: StateSpec) -> Self {
        match s {
            StateSpec::Tri(_) | StateSpec::Lin4(_) => {
                let (g1, g2) = s.couplings();
                StateSpecJson {
                    family: s.family(),
                    g1: Some(g1.into()),
                    g2: Some(g2.into()),
                    g_mag: None,
                    phi_minus: None,
                    z: s.z(),
                }
            }
            StateSpec::Sq4(p) => StateSpecJson {
                family: Family::Sq4,
                g1: None,
                g2: None,
                g_mag: Some(p.g_mag()),
                phi_minus: Some(p.phi_minus()),
                z: p.z(),
            },
        }
    }
}
