//! Constraint domains, their bijections onto the unit ball, and the Jacobian
//! bookkeeping needed to sample on the sphere and reweight back.
//!
//! Three families are supported:
//!
//! - the unit ball itself,
//! - hyper-rectangles `l ≤ β ≤ u`, mapped affinely to the cube `[-1, 1]^D`
//!   and then radially onto the inscribed ball by `β' ↦ β'‖β'‖_∞/‖β'‖₂`,
//! - q-norm balls `‖β‖_q ≤ t`, scaled to radius one and mapped coordinatewise
//!   by `β'ᵢ ↦ sgn(β'ᵢ)|β'ᵢ|^{q/2}`, which turns `Σ|β'ᵢ|^q` into `‖θ‖₂²`.
//!
//! Samplers that work on the sphere see the potential `U∘from_ball` and carry
//! the weight `|dβ/dθ̃|` returned by [`ConstraintDomain::jacobian_weight`].

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{BallPoint, SpherePoint};

/// Tolerance used when checking that a point lies in its domain.
pub const DOMAIN_TOL: f64 = 1e-10;

/// Floor applied to `|θᵢ|` in weights and gradients that carry a negative power of it.
const COORD_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    UnitBall,
    HyperRectangle {
        lower: DVector<f64>,
        upper: DVector<f64>,
    },
    QNormBall {
        q: f64,
        radius: f64,
    },
}

/// A validated constraint region in `R^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintDomain {
    dim: usize,
    shape: Shape,
}

impl ConstraintDomain {
    pub fn unit_ball(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDomain("dimension must be positive".into()));
        }
        Ok(ConstraintDomain {
            dim,
            shape: Shape::UnitBall,
        })
    }

    pub fn rectangle(lower: DVector<f64>, upper: DVector<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidDomain(format!(
                "lower and upper bounds must be non-empty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        for (i, (l, u)) in lower.iter().zip(upper.iter()).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(Error::InvalidDomain(format!(
                    "bound {i}: lower {l} must be finite and below upper {u}"
                )));
            }
        }
        Ok(ConstraintDomain {
            dim: lower.len(),
            shape: Shape::HyperRectangle { lower, upper },
        })
    }

    /// The region `‖β‖_q ≤ radius`, i.e. `Σ|βᵢ|^q ≤ radius^q`.
    pub fn q_norm_ball(dim: usize, q: f64, radius: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDomain("dimension must be positive".into()));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "q must be in (0, inf), got {q}"
            )));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidDomain(format!(
                "radius must be positive, got {radius}"
            )));
        }
        Ok(ConstraintDomain {
            dim,
            shape: Shape::QNormBall { q, radius },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn describe(&self) -> String {
        match &self.shape {
            Shape::UnitBall => format!("unit ball in R^{}", self.dim),
            Shape::HyperRectangle { .. } => format!("hyper-rectangle in R^{}", self.dim),
            Shape::QNormBall { q, radius } => {
                format!("{q}-norm ball of radius {radius} in R^{}", self.dim)
            }
        }
    }

    /// A point guaranteed to be inside the domain: the image of the ball's center.
    pub fn center(&self) -> DVector<f64> {
        match &self.shape {
            Shape::HyperRectangle { lower, upper } => (lower + upper) * 0.5,
            _ => DVector::zeros(self.dim),
        }
    }

    /// How far `beta` is outside the domain, in the units used by [`contains`](Self::contains).
    /// Zero or negative means inside.
    pub fn violation(&self, beta: &DVector<f64>) -> f64 {
        match &self.shape {
            Shape::UnitBall => beta.norm() - 1.0,
            Shape::HyperRectangle { lower, upper } => beta
                .iter()
                .zip(lower.iter().zip(upper.iter()))
                .map(|(b, (l, u))| (l - b).max(b - u))
                .fold(f64::NEG_INFINITY, f64::max),
            Shape::QNormBall { q, radius } => {
                beta.iter()
                    .map(|b| (b / radius).abs().powf(*q))
                    .sum::<f64>()
                    - 1.0
            }
        }
    }

    pub fn contains(&self, beta: &DVector<f64>, tol: f64) -> bool {
        beta.len() == self.dim && self.violation(beta) <= tol
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: len,
            });
        }
        Ok(())
    }

    /// Maps a point of the domain into the unit ball.
    pub fn to_ball(&self, beta: &DVector<f64>) -> Result<BallPoint> {
        self.check_dim(beta.len())?;
        if !self.contains(beta, DOMAIN_TOL) {
            return Err(Error::OutsideDomain(format!(
                "{} (violation {:e})",
                self.describe(),
                self.violation(beta)
            )));
        }
        let mut theta = match &self.shape {
            Shape::UnitBall => beta.clone(),
            Shape::HyperRectangle { lower, upper } => {
                let cube = DVector::from_fn(self.dim, |i, _| {
                    ((2.0 * beta[i] - (upper[i] + lower[i])) / (upper[i] - lower[i]))
                        .clamp(-1.0, 1.0)
                });
                let two = cube.norm();
                if two == 0.0 {
                    cube
                } else {
                    let scale = cube.amax() / two;
                    cube * scale
                }
            }
            Shape::QNormBall { q, radius } => beta.map(|b| {
                let scaled = b / radius;
                scaled.signum() * scaled.abs().powf(q / 2.0)
            }),
        };
        // Points on the boundary may overshoot by rounding.
        let norm = theta.norm();
        if norm > 1.0 {
            theta /= norm;
        }
        BallPoint::new(theta)
    }

    /// Maps a point of the unit ball back into the domain.
    pub fn from_ball(&self, theta: &BallPoint) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        self.from_ball_into(theta.as_vector(), &mut out);
        out
    }

    /// [`from_ball`](Self::from_ball) writing into `out`; `theta` must lie in
    /// the unit ball. Returns quantities of `theta` reused by the chain rule.
    pub(crate) fn from_ball_into(&self, theta: &DVector<f64>, out: &mut DVector<f64>) -> BallStats {
        let stats = BallStats::of(theta);
        match &self.shape {
            Shape::UnitBall => out.copy_from(theta),
            Shape::HyperRectangle { lower, upper } => {
                let inf = theta[stats.argmax].abs();
                let scale = if inf == 0.0 {
                    0.0
                } else {
                    stats.norm_sq.sqrt() / inf
                };
                for i in 0..self.dim {
                    let cube = (theta[i] * scale).clamp(-1.0, 1.0);
                    let half = 0.5 * (upper[i] - lower[i]);
                    out[i] = (half * cube + 0.5 * (upper[i] + lower[i])).clamp(lower[i], upper[i]);
                }
            }
            Shape::QNormBall { q, radius } => {
                let power = 2.0 / q;
                for i in 0..self.dim {
                    let t = theta[i];
                    out[i] = radius * t.signum() * t.abs().powf(power);
                }
            }
        }
        stats
    }

    /// `|dβ/dθ̃|`: the volume factor from the sphere's surface measure to the
    /// domain's Lebesgue measure at the point `θ̃`.
    pub fn jacobian_weight(&self, theta_tilde: &SpherePoint) -> f64 {
        let d = self.dim;
        let x = theta_tilde.as_vector();
        let theta = x.rows(0, d);
        let height = theta_tilde.last().abs();
        match &self.shape {
            Shape::UnitBall => height,
            Shape::HyperRectangle { lower, upper } => {
                let inf = theta.amax();
                let ratio = if inf == 0.0 { 1.0 } else { theta.norm() / inf };
                let volume: f64 = lower
                    .iter()
                    .zip(upper.iter())
                    .map(|(l, u)| 0.5 * (u - l))
                    .product();
                height * ratio.powi(d as i32) * volume
            }
            Shape::QNormBall { q, radius } => {
                let exponent = 2.0 / q - 1.0;
                let log_prod: f64 = theta.iter().map(|t| t.abs().max(COORD_FLOOR).ln()).sum();
                let df = d as f64;
                (df * (2.0 / q).ln() + exponent * log_prod + df * radius.ln()).exp() * height
            }
        }
    }

    /// Transports `∇_β U` to `∇_θ (U∘from_ball)` by the chain rule.
    pub fn chain_gradient(&self, theta: &BallPoint, grad_beta: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        let theta = theta.as_vector();
        self.chain_gradient_into(theta, &BallStats::of(theta), grad_beta, &mut out);
        out
    }

    pub(crate) fn chain_gradient_into(
        &self,
        theta: &DVector<f64>,
        stats: &BallStats,
        grad_beta: &DVector<f64>,
        out: &mut DVector<f64>,
    ) {
        match &self.shape {
            Shape::UnitBall => out.copy_from(grad_beta),
            Shape::HyperRectangle { lower, upper } => {
                let k = stats.argmax;
                let inf = theta[k];
                let mut along = 0.0;
                for i in 0..self.dim {
                    out[i] = 0.5 * (upper[i] - lower[i]) * grad_beta[i];
                    along += theta[i] * out[i];
                }
                if inf == 0.0 {
                    return;
                }
                // dβ'/dθᵀ = r [I + θ aᵀ] with r = ‖θ‖₂/‖θ‖_∞ and a = θ/‖θ‖₂² − e_k/θ_k.
                let sq = stats.norm_sq;
                let r = sq.sqrt() / inf.abs();
                let c = along / sq;
                for i in 0..self.dim {
                    out[i] = r * (out[i] + theta[i] * c);
                }
                out[k] -= r * along / inf;
            }
            Shape::QNormBall { q, radius } => {
                let exponent = 2.0 / q - 1.0;
                let coef = radius * 2.0 / q;
                for i in 0..self.dim {
                    let t = theta[i].abs();
                    let t = if exponent < 0.0 {
                        t.max(COORD_FLOOR)
                    } else {
                        t
                    };
                    out[i] = coef * t.powf(exponent) * grad_beta[i];
                }
            }
        }
    }
}

/// `‖θ‖₂²` and the index of the largest `|θᵢ|` (lowest index on ties).
#[derive(Debug, Clone, Copy)]
pub(crate) struct BallStats {
    norm_sq: f64,
    argmax: usize,
}

impl BallStats {
    fn of(theta: &DVector<f64>) -> Self {
        let mut norm_sq = 0.0;
        let mut argmax = 0;
        for (i, t) in theta.iter().enumerate() {
            norm_sq += t * t;
            if t.abs() > theta[argmax].abs() {
                argmax = i;
            }
        }
        BallStats { norm_sq, argmax }
    }
}

/// Serializable description of a domain, as written in experiment configs:
/// `constraint = { type = "rectangle", lower = [...], upper = [...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ConstraintConfig {
    UnitBall { dim: usize },
    Rectangle { lower: Vec<f64>, upper: Vec<f64> },
    QNorm { dim: usize, q: f64, radius: f64 },
}

impl ConstraintConfig {
    pub fn build(&self) -> Result<ConstraintDomain> {
        match self {
            ConstraintConfig::UnitBall { dim } => ConstraintDomain::unit_ball(*dim),
            ConstraintConfig::Rectangle { lower, upper } => ConstraintDomain::rectangle(
                DVector::from_column_slice(lower),
                DVector::from_column_slice(upper),
            ),
            ConstraintConfig::QNorm { dim, q, radius } => {
                ConstraintDomain::q_norm_ball(*dim, *q, *radius)
            }
        }
    }
}

impl From<&ConstraintDomain> for ConstraintConfig {
    fn from(domain: &ConstraintDomain) -> Self {
        match &domain.shape {
            Shape::UnitBall => ConstraintConfig::UnitBall { dim: domain.dim },
            Shape::HyperRectangle { lower, upper } => ConstraintConfig::Rectangle {
                lower: lower.iter().copied().collect(),
                upper: upper.iter().copied().collect(),
            },
            Shape::QNormBall { q, radius } => ConstraintConfig::QNorm {
                dim: domain.dim,
                q: *q,
                radius: *radius,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ball_to_sphere, Hemisphere};
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dv(xs: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(xs)
    }

    fn paper_box() -> ConstraintDomain {
        ConstraintDomain::rectangle(dv(&[0.0, 0.0]), dv(&[5.0, 1.0])).unwrap()
    }

    /// Random interior ball point with no coordinate near zero, no near-tie in
    /// `|θ|`, and away from the boundary, so finite differences stay on one smooth piece.
    fn smooth_ball_point(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
        loop {
            let v = DVector::from_fn(d, |_, _| rng.random_range(-1.0f64..1.0));
            let n = v.norm();
            if n < 0.2 || n > 0.95 {
                continue;
            }
            let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
            mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let tie_free = d == 1 || mags[0] - mags[1] > 1e-3;
            if tie_free && mags[d - 1] > 0.05 {
                return v;
            }
        }
    }

    /// Determinant oracle built only from finite differences of `from_ball`
    /// and of the lift `θ ↦ (θ, √(1−‖θ‖²))`; the sphere's area element is the
    /// Gram determinant of the lift.
    fn fd_weight(domain: &ConstraintDomain, theta: &DVector<f64>) -> f64 {
        let d = theta.len();
        let h = 1e-6;
        let map = |t: &DVector<f64>| domain.from_ball(&BallPoint::new(t.clone()).unwrap());
        let lift = |t: &DVector<f64>| {
            let mut out = DVector::zeros(d + 1);
            out.rows_mut(0, d).copy_from(t);
            out[d] = (1.0 - t.norm_squared()).sqrt();
            out
        };
        let mut jb = DMatrix::zeros(d, d);
        let mut js = DMatrix::zeros(d + 1, d);
        for j in 0..d {
            let mut plus = theta.clone();
            let mut minus = theta.clone();
            plus[j] += h;
            minus[j] -= h;
            jb.set_column(j, &((map(&plus) - map(&minus)) / (2.0 * h)));
            js.set_column(j, &((lift(&plus) - lift(&minus)) / (2.0 * h)));
        }
        let area = (js.transpose() * &js).determinant().sqrt();
        jb.determinant().abs() / area
    }

    #[test]
    fn rectangle_center_maps_to_center() {
        let theta = paper_box().to_ball(&dv(&[2.5, 0.5])).unwrap();
        assert_eq!(theta.as_vector(), &dv(&[0.0, 0.0]));
    }

    #[test]
    fn cube_vertex_maps_to_ball_boundary() {
        let cube = ConstraintDomain::rectangle(dv(&[-1.0, -1.0]), dv(&[1.0, 1.0])).unwrap();
        let theta = cube.to_ball(&dv(&[1.0, 1.0])).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((theta.as_vector() - dv(&[s, s])).amax() < 1e-15);
    }

    #[test]
    fn diamond_square_root_map() {
        let diamond = ConstraintDomain::q_norm_ball(2, 1.0, 1.0).unwrap();
        let theta = diamond.to_ball(&dv(&[0.25, -0.25])).unwrap();
        assert!((theta.as_vector() - dv(&[0.5, -0.5])).amax() < 1e-15);
        assert!((theta.as_vector().norm_squared() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rectangle_from_ball_by_hand() {
        let beta = paper_box().from_ball(&BallPoint::new(dv(&[1.0, 0.0])).unwrap());
        assert!((beta - dv(&[5.0, 0.5])).amax() < 1e-15);
    }

    #[test]
    fn two_norm_ball_maps_are_identity() {
        let ball = ConstraintDomain::q_norm_ball(3, 2.0, 1.0).unwrap();
        let beta = dv(&[0.3, -0.4, 0.5]);
        let theta = ball.to_ball(&beta).unwrap();
        assert!((theta.as_vector() - &beta).amax() < 1e-15);
        assert!((ball.from_ball(&theta) - &beta).amax() < 1e-15);
    }

    #[test]
    fn outside_points_are_rejected() {
        assert!(matches!(
            paper_box().to_ball(&dv(&[5.1, 0.5])),
            Err(Error::OutsideDomain(_))
        ));
        let diamond = ConstraintDomain::q_norm_ball(2, 1.0, 2.0).unwrap();
        assert!(diamond.to_ball(&dv(&[1.5, 0.6])).is_err());
        assert!(diamond.to_ball(&dv(&[1.5, 0.4])).is_ok());
    }

    #[test]
    fn invalid_domains_are_rejected() {
        assert!(ConstraintDomain::rectangle(dv(&[0.0, 1.0]), dv(&[1.0, 1.0])).is_err());
        assert!(ConstraintDomain::rectangle(dv(&[0.0]), dv(&[1.0, 1.0])).is_err());
        assert!(ConstraintDomain::q_norm_ball(2, 0.0, 1.0).is_err());
        assert!(ConstraintDomain::q_norm_ball(2, 1.0, -1.0).is_err());
        assert!(ConstraintDomain::unit_ball(0).is_err());
    }

    #[test]
    fn boundary_maps_to_sphere_equator() {
        let rect =
            ConstraintDomain::rectangle(dv(&[0.0, -2.0, 1.0]), dv(&[5.0, 0.5, 3.0])).unwrap();
        let theta = rect.to_ball(&dv(&[1.0, 0.5, 2.0])).unwrap();
        assert!((theta.as_vector().norm() - 1.0).abs() < 1e-12);
        let theta = rect.to_ball(&dv(&[0.0, 0.1, 2.9])).unwrap();
        assert!((theta.as_vector().norm() - 1.0).abs() < 1e-12);

        for q in [0.8, 1.0, 1.2, 3.0] {
            let ball = ConstraintDomain::q_norm_ball(3, q, 2.0).unwrap();
            let raw = dv(&[0.3, -1.0, 0.7]);
            let norm = raw
                .iter()
                .map(|b| b.abs().powf(q))
                .sum::<f64>()
                .powf(1.0 / q);
            let theta = ball.to_ball(&(raw * (2.0 / norm))).unwrap();
            assert!((theta.as_vector().norm() - 1.0).abs() < 1e-12, "q = {q}");
        }
    }

    #[test]
    fn pole_weight_is_one() {
        let ball = ConstraintDomain::unit_ball(4).unwrap();
        assert_eq!(ball.jacobian_weight(&SpherePoint::pole(4)), 1.0);
        let eq = SpherePoint::new(dv(&[0.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        assert_eq!(ball.jacobian_weight(&eq), 0.0);
    }

    #[test]
    fn rectangle_weight_at_center_uses_axis_limit() {
        let w = paper_box().jacobian_weight(&SpherePoint::pole(2));
        assert!((w - 2.5 * 0.5).abs() < 1e-15);
    }

    #[test]
    fn weights_match_finite_difference_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let domains = [
            paper_box(),
            ConstraintDomain::rectangle(dv(&[-1.0, 0.0, 2.0, -3.0]), dv(&[1.0, 0.5, 4.0, 3.0]))
                .unwrap(),
            ConstraintDomain::q_norm_ball(3, 1.0, 1.0).unwrap(),
            ConstraintDomain::q_norm_ball(4, 0.8, 1.5).unwrap(),
            ConstraintDomain::q_norm_ball(4, 1.2, 0.7).unwrap(),
            ConstraintDomain::q_norm_ball(3, 2.0, 2.0).unwrap(),
            ConstraintDomain::unit_ball(3).unwrap(),
        ];
        for domain in &domains {
            for _ in 0..20 {
                let theta = smooth_ball_point(&mut rng, domain.dim());
                let lifted =
                    ball_to_sphere(&BallPoint::new(theta.clone()).unwrap(), Hemisphere::Upper);
                let w = domain.jacobian_weight(&lifted);
                let oracle = fd_weight(domain, &theta);
                assert!(
                    (w - oracle).abs() / oracle < 1e-5,
                    "{}: {w} vs {oracle}",
                    domain.describe()
                );
            }
        }
    }

    #[test]
    fn chain_gradient_matches_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let domains = [
            paper_box(),
            ConstraintDomain::q_norm_ball(3, 1.0, 1.0).unwrap(),
            ConstraintDomain::q_norm_ball(3, 0.8, 2.0).unwrap(),
            ConstraintDomain::q_norm_ball(3, 1.2, 1.0).unwrap(),
        ];
        for domain in &domains {
            let d = domain.dim();
            let a = DMatrix::from_fn(d, d, |i, j| if i == j { 2.0 } else { 0.3 });
            let c = DVector::from_fn(d, |i, _| 0.1 * i as f64 - 0.2);
            let u = |beta: &DVector<f64>| 0.5 * ((beta - &c).transpose() * &a * (beta - &c))[0];
            for _ in 0..20 {
                let theta = smooth_ball_point(&mut rng, d);
                let point = BallPoint::new(theta.clone()).unwrap();
                let beta = domain.from_ball(&point);
                let grad = domain.chain_gradient(&point, &(&a * (&beta - &c)));
                let h = 1e-6;
                for j in 0..d {
                    let mut p = theta.clone();
                    let mut m = theta.clone();
                    p[j] += h;
                    m[j] -= h;
                    let fd = (u(&domain.from_ball(&BallPoint::new(p).unwrap()))
                        - u(&domain.from_ball(&BallPoint::new(m).unwrap())))
                        / (2.0 * h);
                    let scale = fd.abs().max(1e-3);
                    assert!(
                        (grad[j] - fd).abs() / scale < 1e-5,
                        "{}: {} vs {fd}",
                        domain.describe(),
                        grad[j]
                    );
                }
            }
        }
    }

    #[test]
    fn unit_ball_gradient_is_untouched() {
        let ball = ConstraintDomain::unit_ball(2).unwrap();
        let g = dv(&[1.5, -2.0]);
        assert_eq!(
            ball.chain_gradient(&BallPoint::new(dv(&[0.1, 0.2])).unwrap(), &g),
            g
        );
    }

    #[test]
    fn argmax_ties_break_low() {
        assert_eq!(BallStats::of(&dv(&[0.5, -0.5, 0.1])).argmax, 0);
        assert_eq!(BallStats::of(&dv(&[0.1, -0.5, 0.5])).argmax, 1);
    }

    #[test]
    fn config_round_trip() {
        let cfg = ConstraintConfig::Rectangle {
            lower: vec![0.0, 0.0],
            upper: vec![5.0, 1.0],
        };
        let domain = cfg.build().unwrap();
        assert_eq!(ConstraintConfig::from(&domain), cfg);
        let text = "type = \"q-norm\"\ndim = 3\nq = 1.0\nradius = 2.0\n";
        let parsed: ConstraintConfig = toml::from_str(text).unwrap();
        assert_eq!(
            parsed.build().unwrap(),
            ConstraintDomain::q_norm_ball(3, 1.0, 2.0).unwrap()
        );
    }

    fn interior_point(domain: &ConstraintDomain, raw: &[f64]) -> DVector<f64> {
        // Squash `raw` into the domain interior.
        let theta = DVector::from_column_slice(raw);
        let n = theta.norm();
        let theta = if n >= 0.99 { theta * (0.98 / n) } else { theta };
        domain.from_ball(&BallPoint::new(theta).unwrap())
    }

    proptest! {
        #[test]
        fn ball_maps_invert_each_other(raw in proptest::collection::vec(-1.0f64..1.0, 3), which in 0usize..5) {
            let domain = match which {
                0 => ConstraintDomain::unit_ball(3).unwrap(),
                1 => ConstraintDomain::rectangle(dv(&[0.0, -1.0, 2.0]), dv(&[5.0, 0.5, 2.5])).unwrap(),
                2 => ConstraintDomain::q_norm_ball(3, 1.0, 3.0).unwrap(),
                3 => ConstraintDomain::q_norm_ball(3, 0.8, 1.0).unwrap(),
                _ => ConstraintDomain::q_norm_ball(3, 1.2, 0.5).unwrap(),
            };
            let beta = interior_point(&domain, &raw);
            prop_assert!(domain.contains(&beta, 0.0));
            let theta = domain.to_ball(&beta).unwrap();
            let back = domain.from_ball(&theta);
            prop_assert!((&back - &beta).amax() < 1e-10);
            let again = domain.to_ball(&back).unwrap();
            prop_assert!((again.as_vector() - theta.as_vector()).amax() < 1e-10);
        }

        #[test]
        fn from_ball_stays_in_domain(raw in proptest::collection::vec(-1.0f64..1.0, 4), q in 0.5f64..3.0) {
            let theta = DVector::from_column_slice(&raw);
            let n = theta.norm();
            let theta = if n > 1.0 { theta / n } else { theta };
            let point = BallPoint::new(theta).unwrap();
            let rect = ConstraintDomain::rectangle(dv(&[0.0; 4]), dv(&[5.0, 0.5, 0.5, 0.5])).unwrap();
            prop_assert!(rect.contains(&rect.from_ball(&point), 1e-10));
            let qball = ConstraintDomain::q_norm_ball(4, q, 1.7).unwrap();
            prop_assert!(qball.contains(&qball.from_ball(&point), 1e-10));
        }
    }
}
