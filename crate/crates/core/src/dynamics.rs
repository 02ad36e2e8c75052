//! Forced oscillator models as smooth non-autonomous planar vector fields.
//!
//! Six variants are supported:
//!
//! | kind  | restoring/damping part                     | drive                                   |
//! |-------|--------------------------------------------|-----------------------------------------|
//! | `L1`  | `-a x y + g x - b x^3`                     | `f1 cos(w1 t) + f2 cos(w2 t + phi) + A` |
//! | `L2`  | same as `L1`                               | same as `L1`                            |
//! | `LM`  | `-a x y - g x - b x^3`                     | `f1 sin(w1 t) + f2 sin(w2 t + phi) + A` |
//! | `NP1` | `(-a y - l x y^2 - w0^2 x + drive) / (1 + l x^2)`  | cosine drive as `L1`            |
//! | `NP2` | same as `NP1`                              | same as `NP1`                           |
//! | `NP3` | `NP1` numerator plus a parametric term     | same as `NP1`                           |
//!
//! The NP3 parametric term is `W0^2 [2 e cos(wp t) + e^2/2 (1 + cos(2 wp t))] x`,
//! which comes from modulating the rotation rate as `W0 (1 + e cos(wp t))`.
//!
//! `L1`/`L2` and `NP1`/`NP2` share a right-hand side; the distinction is only the
//! intended experiment (bias vs. second forcing) and the defaults that go with it.
//!
//! For the non-polynomial kinds the second-forcing frequency `omega2` has no
//! agreed reference value: the published description gives `5.99865` labelled as
//! `f2` while also sweeping `f2` over `[0, 1.5]`. The value is most plausibly the
//! frequency, and it is exposed as an ordinary parameter.

use core::fmt;
use core::str::FromStr;

use crate::math::{cos, sin};

/// Model variant selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemKind {
    /// Liénard oscillator with constant bias.
    L1,
    /// Liénard oscillator with a second periodic forcing.
    L2,
    /// Liénard oscillator in the multistable (sine drive, double-well) form.
    LM,
    /// Non-polynomial rotating-parabola oscillator with constant bias.
    NP1,
    /// Non-polynomial oscillator with a second periodic forcing.
    NP2,
    /// Non-polynomial oscillator with a parametrically driven rotation rate.
    NP3,
}

impl SystemKind {
    pub const ALL: [SystemKind; 6] = [
        SystemKind::L1,
        SystemKind::L2,
        SystemKind::LM,
        SystemKind::NP1,
        SystemKind::NP2,
        SystemKind::NP3,
    ];

    pub fn is_lienard(self) -> bool {
        matches!(self, SystemKind::L1 | SystemKind::L2 | SystemKind::LM)
    }

    pub fn is_non_polynomial(self) -> bool {
        !self.is_lienard()
    }

    pub fn name(self) -> &'static str {
        match self {
            SystemKind::L1 => "L1",
            SystemKind::L2 => "L2",
            SystemKind::LM => "LM",
            SystemKind::NP1 => "NP1",
            SystemKind::NP2 => "NP2",
            SystemKind::NP3 => "NP3",
        }
    }

    /// Whether `param` is a meaningful (non-forced-zero) field for this kind.
    pub fn uses(self, param: Param) -> bool {
        use Param::*;
        match param {
            Alpha | F1 | Omega1 | F2 | Omega2 | Phi | Bias => true,
            Beta | Gamma => self.is_lienard(),
            Lambda | Omega0Sq => self.is_non_polynomial(),
            BigOmega0Sq | Epsilon | OmegaP => self == SystemKind::NP3,
        }
    }
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemKind {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SystemKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or(SpecError::UnknownKind)
    }
}

/// Scalar parameters of [`SystemSpec`], addressable by name (config keys, scan axes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    Alpha,
    Beta,
    Gamma,
    Lambda,
    Omega0Sq,
    BigOmega0Sq,
    Epsilon,
    OmegaP,
    F1,
    Omega1,
    F2,
    Omega2,
    Phi,
    Bias,
}

impl Param {
    pub const ALL: [Param; 14] = [
        Param::Alpha,
        Param::Beta,
        Param::Gamma,
        Param::Lambda,
        Param::Omega0Sq,
        Param::BigOmega0Sq,
        Param::Epsilon,
        Param::OmegaP,
        Param::F1,
        Param::Omega1,
        Param::F2,
        Param::Omega2,
        Param::Phi,
        Param::Bias,
    ];

    /// Canonical key used in config files and CSV headers.
    pub fn key(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::Gamma => "gamma",
            Param::Lambda => "lambda",
            Param::Omega0Sq => "omega0_sq",
            Param::BigOmega0Sq => "Omega0_sq",
            Param::Epsilon => "epsilon",
            Param::OmegaP => "omega_p",
            Param::F1 => "f1",
            Param::Omega1 => "omega1",
            Param::F2 => "f2",
            Param::Omega2 => "omega2",
            Param::Phi => "phi",
            Param::Bias => "A",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Param {
    type Err = SpecError;

    /// Keys are case-sensitive because `omega0_sq` and `Omega0_sq` differ.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        Param::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or(SpecError::UnknownParam)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecError {
    UnknownKind,
    UnknownParam,
    /// The parameter is not part of this kind's model and must stay zero.
    UnusedParam(SystemKind, Param),
    NegativeLambda,
    NonFinite(Param),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::UnknownKind => f.write_str("unknown system kind"),
            SpecError::UnknownParam => f.write_str("unknown parameter name"),
            SpecError::UnusedParam(k, p) => {
                write!(f, "parameter `{p}` is not used by kind {k} and must be 0")
            }
            SpecError::NegativeLambda => f.write_str("lambda must be >= 0"),
            SpecError::NonFinite(p) => write!(f, "parameter `{p}` is not finite"),
        }
    }
}

impl core::error::Error for SpecError {}

/// Model variant plus every scalar parameter.
///
/// Fields that the selected kind does not use are held at exactly `0.0`; this is
/// enforced by [`SystemSpec::set`] and checked by [`SystemSpec::validate`], so two
/// specs describing the same model compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    pub kind: SystemKind,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub omega0_sq: f64,
    pub big_omega0_sq: f64,
    pub epsilon: f64,
    pub omega_p: f64,
    pub f1: f64,
    pub omega1: f64,
    pub f2: f64,
    pub omega2: f64,
    pub phi: f64,
    /// Constant bias `A`.
    pub bias: f64,
}

impl SystemSpec {
    /// All parameters zero.
    pub const fn zero(kind: SystemKind) -> Self {
        SystemSpec {
            kind,
            alpha: 0.0,
            beta: 0.0,
            gamma: 0.0,
            lambda: 0.0,
            omega0_sq: 0.0,
            big_omega0_sq: 0.0,
            epsilon: 0.0,
            omega_p: 0.0,
            f1: 0.0,
            omega1: 0.0,
            f2: 0.0,
            omega2: 0.0,
            phi: 0.0,
            bias: 0.0,
        }
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::Alpha => self.alpha,
            Param::Beta => self.beta,
            Param::Gamma => self.gamma,
            Param::Lambda => self.lambda,
            Param::Omega0Sq => self.omega0_sq,
            Param::BigOmega0Sq => self.big_omega0_sq,
            Param::Epsilon => self.epsilon,
            Param::OmegaP => self.omega_p,
            Param::F1 => self.f1,
            Param::Omega1 => self.omega1,
            Param::F2 => self.f2,
            Param::Omega2 => self.omega2,
            Param::Phi => self.phi,
            Param::Bias => self.bias,
        }
    }

    fn slot(&mut self, param: Param) -> &mut f64 {
        match param {
            Param::Alpha => &mut self.alpha,
            Param::Beta => &mut self.beta,
            Param::Gamma => &mut self.gamma,
            Param::Lambda => &mut self.lambda,
            Param::Omega0Sq => &mut self.omega0_sq,
            Param::BigOmega0Sq => &mut self.big_omega0_sq,
            Param::Epsilon => &mut self.epsilon,
            Param::OmegaP => &mut self.omega_p,
            Param::F1 => &mut self.f1,
            Param::Omega1 => &mut self.omega1,
            Param::F2 => &mut self.f2,
            Param::Omega2 => &mut self.omega2,
            Param::Phi => &mut self.phi,
            Param::Bias => &mut self.bias,
        }
    }

    /// Sets a parameter, rejecting fields the kind does not use (unless the value is 0).
    pub fn set(&mut self, param: Param, value: f64) -> Result<(), SpecError> {
        if !value.is_finite() {
            return Err(SpecError::NonFinite(param));
        }
        if !self.kind.uses(param) && value != 0.0 {
            return Err(SpecError::UnusedParam(self.kind, param));
        }
        if param == Param::Lambda && value < 0.0 {
            return Err(SpecError::NegativeLambda);
        }
        *self.slot(param) = value;
        Ok(())
    }

    /// Builder form of [`SystemSpec::set`].
    pub fn with(mut self, param: Param, value: f64) -> Result<Self, SpecError> {
        self.set(param, value)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        for p in Param::ALL {
            let v = self.get(p);
            if !v.is_finite() {
                return Err(SpecError::NonFinite(p));
            }
            if !self.kind.uses(p) && v != 0.0 {
                return Err(SpecError::UnusedParam(self.kind, p));
            }
        }
        if self.lambda < 0.0 {
            return Err(SpecError::NegativeLambda);
        }
        Ok(())
    }

    /// Same parameters under a different kind, zeroing whatever the new kind does not use.
    pub fn with_kind(&self, kind: SystemKind) -> Self {
        let mut out = SystemSpec::zero(kind);
        for p in Param::ALL {
            if kind.uses(p) {
                *out.slot(p) = self.get(p);
            }
        }
        out
    }

    /// External drive (first forcing, second forcing and bias) at time `t`.
    #[inline]
    pub fn drive(&self, t: f64) -> f64 {
        match self.kind {
            SystemKind::LM => {
                self.f1 * sin(self.omega1 * t)
                    + self.f2 * sin(self.omega2 * t + self.phi)
                    + self.bias
            }
            _ => {
                self.f1 * cos(self.omega1 * t)
                    + self.f2 * cos(self.omega2 * t + self.phi)
                    + self.bias
            }
        }
    }

    /// Time-dependent linear stiffness added by the parametric drive (NP3 only).
    #[inline]
    fn parametric_stiffness(&self, t: f64) -> f64 {
        if self.kind != SystemKind::NP3 {
            return 0.0;
        }
        let e = self.epsilon;
        let wt = self.omega_p * t;
        self.big_omega0_sq * (2.0 * e * cos(wt) + 0.5 * e * e * (1.0 + cos(2.0 * wt)))
    }
}

/// Phase-space point `(x, y = dx/dt)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct State {
    pub x: f64,
    pub y: f64,
}

impl State {
    pub const ORIGIN: State = State { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        State { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub(crate) fn axpy(self, h: f64, d: State) -> State {
        State {
            x: self.x + h * d.x,
            y: self.y + h * d.y,
        }
    }
}

/// 2x2 matrix stored row-major: `m[row][col]`.
pub type Mat2 = [[f64; 2]; 2];

/// Time derivative `(dx/dt, dy/dt)` at `(s, t)`.
#[inline]
pub fn vector_field(spec: &SystemSpec, s: State, t: f64) -> State {
    let State { x, y } = s;
    let dy = match spec.kind {
        SystemKind::L1 | SystemKind::L2 => {
            -spec.alpha * x * y + spec.gamma * x - spec.beta * x * x * x + spec.drive(t)
        }
        SystemKind::LM => {
            -spec.alpha * x * y - spec.gamma * x - spec.beta * x * x * x + spec.drive(t)
        }
        SystemKind::NP1 | SystemKind::NP2 | SystemKind::NP3 => {
            let l = spec.lambda;
            let numerator = -spec.alpha * y - l * x * y * y - spec.omega0_sq * x
                + spec.parametric_stiffness(t) * x
                + spec.drive(t);
            numerator / (1.0 + l * x * x)
        }
    };
    State { x: y, y: dy }
}

/// Analytic state Jacobian `d(dx/dt, dy/dt) / d(x, y)`.
#[inline]
pub fn jacobian(spec: &SystemSpec, s: State, t: f64) -> Mat2 {
    let State { x, y } = s;
    let (dfx, dfy) = match spec.kind {
        SystemKind::L1 | SystemKind::L2 => (
            -spec.alpha * y + spec.gamma - 3.0 * spec.beta * x * x,
            -spec.alpha * x,
        ),
        SystemKind::LM => (
            -spec.alpha * y - spec.gamma - 3.0 * spec.beta * x * x,
            -spec.alpha * x,
        ),
        SystemKind::NP1 | SystemKind::NP2 | SystemKind::NP3 => {
            let l = spec.lambda;
            let k = spec.parametric_stiffness(t);
            let denom = 1.0 + l * x * x;
            let numerator =
                -spec.alpha * y - l * x * y * y - spec.omega0_sq * x + k * x + spec.drive(t);
            let dn_dx = -l * y * y - spec.omega0_sq + k;
            (
                (dn_dx * denom - numerator * 2.0 * l * x) / (denom * denom),
                (-spec.alpha - 2.0 * l * x * y) / denom,
            )
        }
    };
    [[0.0, 1.0], [dfx, dfy]]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lienard() -> SystemSpec {
        let mut s = SystemSpec::zero(SystemKind::L1);
        s.alpha = 0.45;
        s.beta = 0.5;
        s.gamma = 0.5;
        s.f1 = 0.2;
        s.omega1 = 0.7315;
        s
    }

    fn mechanical() -> SystemSpec {
        let mut s = SystemSpec::zero(SystemKind::NP1);
        s.omega0_sq = 0.25;
        s.lambda = 0.5;
        s.alpha = 0.2;
        s.f1 = 3.1665;
        s.omega1 = 1.0;
        s
    }

    #[test]
    fn lienard_origin_sees_only_forcing() {
        assert_eq!(
            vector_field(&lienard(), State::ORIGIN, 0.0),
            State::new(0.0, 0.2)
        );
    }

    #[test]
    fn mechanical_origin_and_unit_point() {
        let spec = mechanical();
        assert_eq!(
            vector_field(&spec, State::ORIGIN, 0.0),
            State::new(0.0, 3.1665)
        );
        // (-0.2 - 0.5 - 0.25 + 3.1665) / 1.5
        let d = vector_field(&spec, State::new(1.0, 1.0), 0.0);
        assert_eq!(d.x, 1.0);
        assert!((d.y - 2.2165 / 1.5).abs() < 1e-15);
        assert!((d.y - 1.477_666_666_666_666_7).abs() < 1e-12);
    }

    #[test]
    fn bias_only() {
        let mut spec = lienard();
        spec.f1 = 0.0;
        spec.bias = 0.5;
        for t in [0.0, 1.3, -7.0, 1e4] {
            assert_eq!(vector_field(&spec, State::ORIGIN, t), State::new(0.0, 0.5));
        }
    }

    #[test]
    fn jacobian_at_origin() {
        assert_eq!(
            jacobian(&lienard(), State::ORIGIN, 3.0),
            [[0.0, 1.0], [0.5, 0.0]]
        );
        assert_eq!(
            jacobian(&mechanical(), State::ORIGIN, 0.0),
            [[0.0, 1.0], [-0.25, -0.2]]
        );
    }

    #[test]
    fn unused_params_rejected() {
        let mut spec = SystemSpec::zero(SystemKind::L1);
        assert_eq!(
            spec.set(Param::Lambda, 0.5),
            Err(SpecError::UnusedParam(SystemKind::L1, Param::Lambda))
        );
        assert!(spec.set(Param::Lambda, 0.0).is_ok());
        let mut np = SystemSpec::zero(SystemKind::NP1);
        assert_eq!(np.set(Param::Lambda, -1.0), Err(SpecError::NegativeLambda));
        assert!(np.set(Param::Epsilon, 0.1).is_err());
        np.beta = 1.0;
        assert!(np.validate().is_err());
    }

    #[test]
    fn names_round_trip() {
        for p in Param::ALL {
            assert_eq!(p.key().parse::<Param>(), Ok(p));
        }
        for k in SystemKind::ALL {
            assert_eq!(k.name().parse::<SystemKind>(), Ok(k));
        }
        assert_eq!("np3".parse::<SystemKind>(), Ok(SystemKind::NP3));
        assert!("omega0_SQ".parse::<Param>().is_err());
    }

    #[test]
    fn with_kind_zeroes_foreign_fields() {
        let mut np3 = SystemSpec::zero(SystemKind::NP3);
        np3.lambda = 0.5;
        np3.epsilon = 0.081;
        np3.f1 = 1.0;
        let np2 = np3.with_kind(SystemKind::NP2);
        assert_eq!(np2.epsilon, 0.0);
        assert_eq!(np2.lambda, 0.5);
        assert_eq!(np2.f1, 1.0);
        assert!(np2.validate().is_ok());
        let l = np3.with_kind(SystemKind::L1);
        assert_eq!(l.lambda, 0.0);
    }
}
