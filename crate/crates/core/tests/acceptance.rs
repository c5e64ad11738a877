//! Acceptance suite. Runs every criterion in sequence, so timings are not
//! distorted by parallel chains, prints one `criterion N: PASS|FAIL` line
//! each, and exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use sphmc_core::constraints::{ConstraintDomain, Shape, DOMAIN_TOL};
use sphmc_core::diagnostics::{
    ess, weighted_mean_standard_errors, weighted_moments, weighted_quantile,
};
use sphmc_core::geometry::{
    ball_to_sphere, geodesic_flow, sample_tangent_velocity, sphere_to_ball, BallPoint, Hemisphere,
    SpherePoint, TangentVector,
};
use sphmc_core::harness::{
    build_problem, draws_file_name, read_draws, run_experiment, ExperimentConfig, ExperimentSpec,
    Problem,
};
use sphmc_core::models::{fgm_pmf, TruncatedGaussian};
use sphmc_core::samplers::spherical_leapfrog;
use sphmc_core::{efficiency_report, run_chain, Chain, SamplerKind, TargetModel};

/// Whether a criterion held, and the numbers behind the verdict.
struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn main() -> ExitCode {
    let criteria: [fn() -> Verdict; 11] = [
        criterion_01_table_one,
        criterion_02_cross_sampler_agreement,
        criterion_03_efficiency_ordering,
        criterion_04_geodesic_invariants,
        criterion_05_energy_error_scaling,
        criterion_06_reversibility,
        criterion_07_jacobian_oracles,
        criterion_08_ess_oracle,
        criterion_09_constraint_satisfaction,
        criterion_10_copula,
        criterion_11_shrinkage_paths,
    ];
    let mut failed = 0;
    for (i, criterion) in criteria.iter().enumerate() {
        let v = catch_unwind(AssertUnwindSafe(criterion))
            .unwrap_or_else(|_| verdict(false, "panicked"));
        println!(
            "criterion {}: {} {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.pass);
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn spec(toml: &str) -> ExperimentSpec {
    ExperimentConfig::from_toml(toml)
        .unwrap()
        .resolve(None)
        .unwrap()
}

fn chain(spec: &ExperimentSpec, problem: &Problem, sampler: SamplerKind, seed: u64) -> Chain {
    let cfg = spec.sampler_config(sampler, seed);
    run_chain(
        sampler,
        problem.model.as_ref(),
        &problem.domain,
        &cfg,
        spec.num_iter,
        spec.burn_in,
    )
    .unwrap()
}

fn dv(xs: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(xs)
}

/// The D = 10 experiment with tuning fixed before the acceptance runs.
const TG10: &str = r#"
kind = "truncated-gaussian"
dim = 10
[sph]
num_leapfrog = 3
trajectory_length = 0.8
[wall]
step_size = 0.3
num_leapfrog = 5
[rwm]
proposal_scale = 0.02
"#;

fn criterion_01_table_one() -> Verdict {
    let spec = spec(
        "kind = \"truncated-gaussian\"\ndim = 2\nnum_iter = 101000\nburn_in = 1000\n[rwm]\nproposal_scale = 0.7\n",
    );
    let problem = build_problem(&spec, None).unwrap();
    let want_mean = [0.791, 0.489];
    let want_cov = [[0.327, 0.017], [0.017, 0.080]];
    let mut pass = true;
    let mut detail = String::new();
    for k in SamplerKind::ALL {
        let c = chain(&spec, &problem, k, 2013);
        let (m, cov) = weighted_moments(&c.draws, &c.weights).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            worst = worst.max((m[i] - want_mean[i]).abs());
            for j in 0..2 {
                worst = worst.max((cov[(i, j)] - want_cov[i][j]).abs());
            }
        }
        pass &= worst <= 0.01;
        detail += &format!(
            "[{k}: mean ({:.4}, {:.4}) cov ({:.4}, {:.4}, {:.4}) max err {:.4} in {:.1}s] ",
            m[0],
            m[1],
            cov[(0, 0)],
            cov[(0, 1)],
            cov[(1, 1)],
            worst,
            c.elapsed_seconds
        );
    }
    verdict(pass, &detail)
}

fn criterion_02_cross_sampler_agreement() -> Verdict {
    let spec = spec(&format!("num_iter = 11000\nburn_in = 1000\n{TG10}"));
    let problem = build_problem(&spec, None).unwrap();
    let estimates: Vec<(SamplerKind, DVector<f64>, DVector<f64>)> = SamplerKind::ALL
        .into_iter()
        .map(|k| {
            let c = chain(&spec, &problem, k, 2013);
            let (m, _) = weighted_moments(&c.draws, &c.weights).unwrap();
            (
                k,
                m,
                weighted_mean_standard_errors(&c.draws, &c.weights).unwrap(),
            )
        })
        .collect();
    let mut pass = true;
    let mut detail = String::new();
    for a in 0..3 {
        for b in a + 1..3 {
            let (ka, ma, sa) = &estimates[a];
            let (kb, mb, sb) = &estimates[b];
            let worst = (0..10)
                .map(|j| (ma[j] - mb[j]).abs() / (sa[j].powi(2) + sb[j].powi(2)).sqrt())
                .fold(0.0, f64::max);
            pass &= worst <= 3.0;
            detail += &format!("[{ka} vs {kb}: max |diff|/se {worst:.2}] ");
        }
    }
    verdict(pass, &detail)
}

fn criterion_03_efficiency_ordering() -> Verdict {
    let spec = spec(&format!("num_iter = 101000\nburn_in = 1000\n{TG10}"));
    let problem = build_problem(&spec, None).unwrap();
    let mut pass = true;
    let mut detail = String::new();
    for seed in 1..=5 {
        let mut rates = Vec::new();
        let mut aps = Vec::new();
        for k in SamplerKind::ALL {
            let c = chain(&spec, &problem, k, seed);
            let report = efficiency_report(&c).unwrap();
            rates.push(report.min_ess_per_sec.unwrap());
            aps.push(report.accept_rate);
        }
        let tuned = aps.iter().all(|a| (0.7..=0.95).contains(a));
        let ordered = rates[0] > rates[1] && rates[1] > rates[2];
        pass &= tuned && ordered;
        detail += &format!(
            "[seed {seed}: min(ESS)/s sph {:.0} wall {:.0} rwm {:.0}; accept {:.2}/{:.2}/{:.2}] ",
            rates[0], rates[1], rates[2], aps[0], aps[1], aps[2]
        );
    }
    verdict(pass, &detail)
}

struct Flat(usize);

impl TargetModel for Flat {
    fn dim(&self) -> usize {
        self.0
    }
    fn potential(&self, _: &DVector<f64>) -> f64 {
        0.0
    }
    fn gradient(&self, _: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(self.0)
    }
    fn description(&self) -> String {
        "flat".into()
    }
}

fn random_ball_point(rng: &mut ChaCha8Rng, d: usize, max_norm: f64) -> BallPoint {
    let v = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let r = max_norm * rng.random::<f64>().powf(1.0 / d as f64);
    BallPoint::new(v.normalize() * r).unwrap()
}

fn random_sphere_state(rng: &mut ChaCha8Rng, d: usize) -> (SpherePoint, TangentVector) {
    let x = ball_to_sphere(&random_ball_point(rng, d, 0.95), Hemisphere::Upper);
    let v = sample_tangent_velocity(&x, rng);
    (x, v)
}

fn criterion_04_geodesic_invariants() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut norm_err, mut speed_err, mut tangency): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for d in [2, 10] {
        let (mut x, mut v) = random_sphere_state(&mut rng, d);
        let speed = v.norm();
        for _ in 0..10_000 {
            (x, v) = geodesic_flow(&x, &v, 0.0731);
            norm_err = norm_err.max((x.as_vector().norm() - 1.0).abs());
            speed_err = speed_err.max((v.norm() - speed).abs() / speed);
            tangency = tangency.max(x.as_vector().dot(v.as_vector()).abs() / speed);
        }
    }
    let domain = ConstraintDomain::rectangle(dv(&[0.0, -1.0, 2.0]), dv(&[5.0, 1.0, 2.5])).unwrap();
    let mut accepted = 0;
    let mut total = 0;
    for (eps, l) in [(0.05, 5), (0.5, 10), (2.0, 20)] {
        let cfg = sphmc_core::SamplerConfig {
            step_size: eps,
            num_leapfrog: l,
            seed: 11,
            ..Default::default()
        };
        let c = run_chain(SamplerKind::Spherical, &Flat(3), &domain, &cfg, 1000, 0).unwrap();
        accepted += c.accepts.iter().filter(|a| **a).count();
        total += c.len();
    }
    let pass = norm_err <= 1e-10 && speed_err <= 1e-10 && tangency <= 1e-10 && accepted == total;
    verdict(pass,
        &format!(
            "norm err {norm_err:.1e}, speed drift {speed_err:.1e}, tangency {tangency:.1e}, flat target accepted {accepted}/{total}"
        ),
    )
}

/// A smooth target on the unit ball: the lifted dynamics see no kinks.
fn smooth_target(d: usize) -> (TruncatedGaussian, ConstraintDomain) {
    let mean = DVector::from_fn(d, |i, _| 0.15 * i as f64 - 0.3);
    let cov = DMatrix::from_fn(d, d, |i, j| 0.2 / (1.0 + (i as f64 - j as f64).abs()));
    (
        TruncatedGaussian::new(mean, cov).unwrap(),
        ConstraintDomain::unit_ball(d).unwrap(),
    )
}

fn hamiltonian(
    model: &dyn TargetModel,
    domain: &ConstraintDomain,
    x: &SpherePoint,
    v: &TangentVector,
) -> f64 {
    model.potential(&domain.from_ball(&sphere_to_ball(x))) + v.kinetic_energy()
}

fn criterion_05_energy_error_scaling() -> Verdict {
    let (model, domain) = smooth_target(5);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let states: Vec<_> = (0..1000)
        .map(|_| random_sphere_state(&mut rng, 5))
        .collect();
    let trajectory = 1.0;
    let mean_abs_dh = |steps: usize| -> f64 {
        let eps = trajectory / steps as f64;
        states
            .iter()
            .map(|(x, v)| {
                let end = spherical_leapfrog(&model, &domain, x, v, eps, steps).unwrap();
                (end.potential + end.velocity.kinetic_energy() - hamiltonian(&model, &domain, x, v))
                    .abs()
            })
            .sum::<f64>()
            / states.len() as f64
    };
    let coarse = mean_abs_dh(20);
    let fine = mean_abs_dh(40);
    let ratio = coarse / fine;
    let pass = (ratio - 4.0).abs() <= 0.3 * 4.0;
    verdict(
        pass,
        &format!("mean |dH| {coarse:.3e} at eps 0.05, {fine:.3e} at eps 0.025, ratio {ratio:.3}"),
    )
}

fn criterion_06_reversibility() -> Verdict {
    let domain = ConstraintDomain::rectangle(
        dv(&[0.0, 0.0, -1.0, 0.0, 2.0]),
        dv(&[5.0, 0.5, 1.0, 0.5, 3.0]),
    )
    .unwrap();
    let model = TruncatedGaussian::new(
        DVector::from_element(5, 0.5),
        sphmc_core::models::banded_covariance(5),
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (x, v) = random_sphere_state(&mut rng, 5);
        let steps = rng.random_range(1..=30);
        let eps = rng.random_range(0.01..0.3);
        let fwd = spherical_leapfrog(&model, &domain, &x, &v, eps, steps).unwrap();
        let mut back_v = fwd.velocity.clone();
        back_v.negate();
        let back = spherical_leapfrog(&model, &domain, &fwd.position, &back_v, eps, steps).unwrap();
        let mut v_end = back.velocity.clone();
        v_end.negate();
        worst = worst
            .max((back.position.as_vector() - x.as_vector()).amax())
            .max((v_end.as_vector() - v.as_vector()).amax());
    }
    verdict(
        worst <= 1e-8,
        &format!("max deviation over 100 trials {worst:.2e}"),
    )
}

/// Interior point with every `|θᵢ|` away from zero and no near-tie for the
/// largest, so finite differences stay on one smooth piece of the map.
fn smooth_ball_point(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(d, |_, _| rng.random_range(-1.0f64..1.0));
        let n = v.norm();
        if !(0.2..=0.95).contains(&n) {
            continue;
        }
        let mut mags: Vec<f64> = v.iter().map(|x| x.abs()).collect();
        mags.sort_by(|a, b| b.total_cmp(a));
        if mags[0] - mags[1] > 1e-3 && mags[d - 1] > 0.05 {
            return v;
        }
    }
}

/// `|det dβ/dθ|` over the sphere's area element, both from finite differences.
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
    jb.determinant().abs() / (js.transpose() * &js).determinant().sqrt()
}

fn criterion_07_jacobian_oracles() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let domains = [
        ConstraintDomain::rectangle(dv(&[0.0, 0.0, -1.0, 2.0]), dv(&[5.0, 1.0, 1.0, 2.5])).unwrap(),
        ConstraintDomain::q_norm_ball(4, 0.8, 1.5).unwrap(),
        ConstraintDomain::q_norm_ball(4, 1.0, 1.0).unwrap(),
        ConstraintDomain::q_norm_ball(4, 1.2, 0.7).unwrap(),
        ConstraintDomain::q_norm_ball(4, 2.0, 2.0).unwrap(),
    ];
    let d = 4;
    let a = DMatrix::from_fn(d, d, |i, j| if i == j { 2.0 } else { 0.3 });
    let c = DVector::from_fn(d, |i, _| 0.1 * i as f64 - 0.2);
    let u = |beta: &DVector<f64>| 0.5 * (beta - &c).dot(&(&a * (beta - &c)));
    let (mut weight_err, mut grad_err): (f64, f64) = (0.0, 0.0);
    for domain in &domains {
        for _ in 0..100 {
            let theta = smooth_ball_point(&mut rng, d);
            let point = BallPoint::new(theta.clone()).unwrap();
            let w = domain.jacobian_weight(&ball_to_sphere(&point, Hemisphere::Upper));
            let oracle = fd_weight(domain, &theta);
            weight_err = weight_err.max((w - oracle).abs() / oracle);

            let beta = domain.from_ball(&point);
            let grad = domain.chain_gradient(&point, &(&a * (&beta - &c)));
            let h = 1e-6;
            let fd = DVector::from_fn(d, |j, _| {
                let mut p = theta.clone();
                let mut m = theta.clone();
                p[j] += h;
                m[j] -= h;
                (u(&domain.from_ball(&BallPoint::new(p).unwrap()))
                    - u(&domain.from_ball(&BallPoint::new(m).unwrap())))
                    / (2.0 * h)
            });
            grad_err = grad_err.max((&grad - &fd).norm() / fd.norm().max(1e-3));
        }
    }
    let pass = weight_err <= 1e-5 && grad_err <= 1e-4;
    verdict(pass, &format!("max relative weight error {weight_err:.2e}, max relative gradient error {grad_err:.2e}"))
}

fn criterion_08_ess_oracle() -> Verdict {
    let b = 100_000;
    let (mut worst_ar, mut worst_iid): (f64, f64) = (0.0, 0.0);
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
        let rho: f64 = 0.5;
        let mut x = 0.0;
        let ar: Vec<f64> = (0..b)
            .map(|_| {
                x = rho * x + (1.0 - rho * rho).sqrt() * rng.sample::<f64, _>(StandardNormal);
                x
            })
            .collect();
        let iid: Vec<f64> = (0..b)
            .map(|_| rng.sample::<f64, _>(StandardNormal))
            .collect();
        let target = b as f64 / 3.0;
        worst_ar = worst_ar.max((ess(&ar).unwrap().ess - target).abs() / target);
        worst_iid = worst_iid.max((ess(&iid).unwrap().ess - b as f64).abs() / b as f64);
    }
    let pass = worst_ar <= 0.2 && worst_iid <= 0.15;
    verdict(
        pass,
        &format!("max relative error AR(1) {worst_ar:.3}, iid {worst_iid:.3} over 10 seeds"),
    )
}

fn criterion_09_constraint_satisfaction() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let experiments = [
        ("tg2", "kind = \"truncated-gaussian\"\ndim = 2\n"),
        ("tg10", "kind = \"truncated-gaussian\"\ndim = 10\n"),
        ("lasso", "kind = \"lasso\"\nshrinkage = 0.3\n"),
        ("bridge08", "kind = \"bridge\"\nq = 0.8\nshrinkage = 0.3\n"),
        ("bridge12", "kind = \"bridge\"\nq = 1.2\nshrinkage = 0.3\n"),
        ("copula", "kind = \"copula\"\n"),
    ];
    let mut pass = true;
    let mut checked = 0usize;
    let mut detail = String::new();
    for (name, body) in experiments {
        let out = dir.path().join(name);
        let mut cfg = ExperimentConfig::from_toml(&format!(
            "{body}num_iter = 3000\nburn_in = 500\nseeds = [1, 2]\n"
        ))
        .unwrap();
        cfg.out_dir = Some(out.clone());
        let spec = cfg.resolve(None).unwrap();
        let outcome = run_experiment(&spec).unwrap();
        pass &= outcome.complete;
        let domain = build_problem(&spec, None).unwrap().domain;
        let mut worst = f64::NEG_INFINITY;
        for k in &spec.samplers {
            for s in &spec.seeds {
                let table = read_draws(out.join(draws_file_name(*k, *s))).unwrap();
                for beta in table.draws() {
                    // The declared constraint, written out independently of `contains`.
                    let excess = match domain.shape() {
                        Shape::HyperRectangle { lower, upper } => (0..beta.len())
                            .map(|i| (lower[i] - beta[i]).max(beta[i] - upper[i]))
                            .fold(f64::NEG_INFINITY, f64::max),
                        Shape::QNormBall { q, radius } => {
                            beta.iter().map(|b| b.abs().powf(*q)).sum::<f64>() / radius.powf(*q)
                                - 1.0
                        }
                        Shape::UnitBall => beta.norm() - 1.0,
                    };
                    worst = worst.max(excess);
                    pass &= excess <= DOMAIN_TOL && domain.contains(&beta, DOMAIN_TOL);
                    checked += 1;
                }
            }
        }
        detail += &format!("[{name}: max excess {worst:.1e}] ");
    }
    verdict(pass, &format!("{checked} draws checked {detail}"))
}

/// A point drawn inside the diamond `Σ|βᵢ| ≤ 1`.
fn diamond_point(rng: &mut ChaCha8Rng, d: usize) -> DVector<f64> {
    let v = DVector::from_fn(d, |_, _| rng.random_range(-1.0f64..1.0));
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    v * (rng.random::<f64>() / l1)
}

fn criterion_10_copula() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let firing = [0.2, 0.3, 0.25, 0.15, 0.35];
    let (mut sum_err, mut min_p): (f64, f64) = (0.0, f64::INFINITY);
    for _ in 0..1000 {
        let pmf = fgm_pmf(&firing, &diamond_point(&mut rng, 10));
        sum_err = sum_err.max((pmf.iter().sum::<f64>() - 1.0).abs());
        min_p = pmf.into_iter().fold(min_p, f64::min);
    }

    // Two neurons by inclusion-exclusion on H(c1, c2) = F1 F2 (1 + β (1 − F1)(1 − F2)).
    let (p1, p2, b) = (0.3, 0.6, -0.7);
    let h = |f1: f64, f2: f64| f1 * f2 * (1.0 + b * (1.0 - f1) * (1.0 - f2));
    let (f1, f2) = (1.0 - p1, 1.0 - p2);
    let hand = [
        h(f1, f2),
        h(1.0, f2) - h(f1, f2),
        h(f1, 1.0) - h(f1, f2),
        1.0 - h(1.0, f2) - h(f1, 1.0) + h(f1, f2),
    ];
    let pmf2 = fgm_pmf(&[p1, p2], &dv(&[b]));
    let hand_err = (0..4)
        .map(|m| (pmf2[m] - hand[m]).abs())
        .fold(0.0, f64::max);

    let mut covered = [0usize; 10];
    for rep in 1..=10u64 {
        let spec = spec(&format!(
            "kind = \"copula\"\nsynthetic_seed = {rep}\nsamplers = [\"sph\"]\n"
        ));
        let problem = build_problem(&spec, None).unwrap();
        let truth = problem.truth.clone().unwrap();
        let c = chain(&spec, &problem, SamplerKind::Spherical, rep);
        for (j, hit) in covered.iter_mut().enumerate() {
            let trace = c.coordinate(j);
            let lo = weighted_quantile(&trace, &c.weights, 0.025).unwrap();
            let hi = weighted_quantile(&trace, &c.weights, 0.975).unwrap();
            *hit += usize::from(lo <= truth[j] && truth[j] <= hi);
        }
    }
    let pass =
        sum_err <= 1e-10 && min_p >= 0.0 && hand_err <= 1e-12 && covered.iter().all(|c| *c >= 8);
    verdict(pass,
        &format!(
            "pmf sum error {sum_err:.1e}, min pmf {min_p:.3e}, n=2 error {hand_err:.1e}, 95% interval coverage per pair {covered:?} of 10"
        ),
    )
}

fn criterion_11_shrinkage_paths() -> Verdict {
    let ridge_spec = spec(
        "kind = \"bridge\"\nq = 2.0\nsamplers = [\"sph\"]\nnum_iter = 21000\nburn_in = 1000\n",
    );
    let problem = build_problem(&ridge_spec, Some(1.0)).unwrap();
    let data = problem.regression.as_ref().unwrap();
    let d = data.dim();
    let xtx = data.x().transpose() * data.x();
    let ridge = (xtx + DMatrix::identity(d, d))
        .lu()
        .solve(&(data.x().transpose() * data.y()))
        .unwrap();
    let c = chain(&ridge_spec, &problem, SamplerKind::Spherical, 11);
    let (mean, _) = weighted_moments(&c.draws, &c.weights).unwrap();
    let ridge_err = (&mean - &ridge).norm() / ridge.norm();

    let zeros = |q: f64| -> (usize, DVector<f64>) {
        let spec = spec(&format!(
            "kind = \"bridge\"\nq = {q}\nsamplers = [\"sph\"]\nnum_iter = 21000\nburn_in = 1000\n"
        ));
        let problem = build_problem(&spec, Some(0.3)).unwrap();
        let c = chain(&spec, &problem, SamplerKind::Spherical, 11);
        let (mean, _) = weighted_moments(&c.draws, &c.weights).unwrap();
        (mean.iter().filter(|m| m.abs() < 1e-3).count(), mean)
    };
    let (z08, m08) = zeros(0.8);
    let (z12, m12) = zeros(1.2);
    let fmt = |m: &DVector<f64>| {
        m.iter()
            .map(|x| format!("{x:.3}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let pass = ridge_err <= 0.05 && z08 > z12;
    verdict(pass,
        &format!(
            "s=1 q=2 relative distance to ridge {ridge_err:.4}; zeros at s=0.3: q=0.8 {z08}, q=1.2 {z12}; means q=0.8 [{}] q=1.2 [{}]",
            fmt(&m08),
            fmt(&m12)
        ),
    )
}
