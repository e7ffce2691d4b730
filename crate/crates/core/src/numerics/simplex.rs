use super::NumericsError;

/// Nelder-Mead coefficients and stopping rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop once every vertex lies within `tol` (max-norm) of the best one.
    pub tol: f64,
    /// Iteration cap; `None` means `500 * dim`.
    pub max_iter: Option<usize>,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tol: 1e-8,
            max_iter: None,
            initial_step: 0.25,
        }
    }
}

impl SimplexConfig {
    pub fn validate(&self) -> Result<(), NumericsError> {
        let positive = [
            self.reflection,
            self.expansion,
            self.contraction,
            self.shrink,
            self.tol,
            self.initial_step,
        ];
        if positive.iter().any(|c| !(*c > 0.0) || !c.is_finite()) {
            return Err(NumericsError::InvalidConfig(
                "coefficients, tol and initial_step must be positive",
            ));
        }
        if self.contraction >= 1.0 || self.shrink >= 1.0 {
            return Err(NumericsError::InvalidConfig(
                "contraction and shrink must lie in (0, 1)",
            ));
        }
        if self.expansion <= self.reflection {
            return Err(NumericsError::InvalidConfig("expansion must exceed reflection"));
        }
        Ok(())
    }

    pub fn iteration_cap(&self, dim: usize) -> usize {
        self.max_iter.unwrap_or(500 * dim.max(1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// The iteration cap was hit before the simplex collapsed below `tol`.
    pub truncated: bool,
}

struct Counted<F> {
    f: F,
    evaluations: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evaluations += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

/// Unconstrained Nelder-Mead minimisation starting from an axis-aligned
/// simplex around `x0`.
///
/// The starting point is vertex 0 and ties never displace the incumbent,
/// so the result satisfies `f <= f(x0)`. Hitting the iteration cap is not
/// an error: the best vertex is returned with `truncated` set.
pub fn simplex_minimize<F>(f: F, x0: &[f64], cfg: &SimplexConfig) -> Result<SimplexResult, NumericsError>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let dim = x0.len();
    if dim == 0 {
        return Err(NumericsError::Empty);
    }
    let mut obj = Counted { f, evaluations: 0 };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), obj.eval(x0)));
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += cfg.initial_step;
        let fv = obj.eval(&v);
        simplex.push((v, fv));
    }

    let cap = cfg.iteration_cap(dim);
    let mut iterations = 0;
    let mut truncated = false;
    let mut centroid = vec![0.0; dim];

    loop {
        // stable: equal values keep their previous order, so the incumbent stays first
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));

        let best = &simplex[0].0;
        let spread = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        if spread <= cfg.tol {
            break;
        }
        if iterations >= cap {
            truncated = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (v, _) in &simplex[..dim] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x;
            }
        }
        centroid.iter_mut().for_each(|c| *c /= dim as f64);

        let f_best = simplex[0].1;
        let f_second = simplex[dim - 1].1;
        let f_worst = simplex[dim].1;
        let worst = simplex[dim].0.clone();

        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&worst).map(|(c, w)| c + t * (c - w)).collect() };

        let xr = along(cfg.reflection);
        let fr = obj.eval(&xr);

        if fr < f_best {
            let xe = along(cfg.reflection * cfg.expansion);
            let fe = obj.eval(&xe);
            simplex[dim] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < f_second {
            simplex[dim] = (xr, fr);
            continue;
        }

        let accepted = if fr < f_worst {
            let xc = along(cfg.reflection * cfg.contraction);
            let fc = obj.eval(&xc);
            (fc <= fr).then_some((xc, fc))
        } else {
            let xc = along(-cfg.contraction);
            let fc = obj.eval(&xc);
            (fc < f_worst).then_some((xc, fc))
        };
        match accepted {
            Some(v) => simplex[dim] = v,
            None => {
                let anchor = simplex[0].0.clone();
                for (v, fv) in simplex.iter_mut().skip(1) {
                    for (x, a) in v.iter_mut().zip(&anchor) {
                        *x = a + cfg.shrink * (*x - a);
                    }
                    *fv = obj.eval(v);
                }
            }
        }
    }

    let (x, f) = simplex.swap_remove(0);
    Ok(SimplexResult {
        x,
        f,
        iterations,
        evaluations: obj.evaluations,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn quadratic_bowl() {
        let r = simplex_minimize(|x| (x[0] - 2.0).powi(2), &[0.0], &SimplexConfig::default()).unwrap();
        assert!((r.x[0] - 2.0).abs() < 1e-6);
        assert!(!r.truncated);
    }

    #[test]
    fn constant_keeps_start() {
        let x0 = [0.3, -1.7, 2.0];
        let r = simplex_minimize(|_| 4.5, &x0, &SimplexConfig::default()).unwrap();
        assert_eq!(r.x, x0.to_vec());
        assert_eq!(r.f, 4.5);
    }

    #[test]
    fn rosenbrock_from_classic_start() {
        // dense grid oracle: the minimum over [-2,2]^2 sits at (1,1)
        let mut grid_best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=400 {
            for j in 0..=400 {
                let p = [-2.0 + i as f64 * 0.01, -2.0 + j as f64 * 0.01];
                let v = rosenbrock(&p);
                if v < grid_best.0 {
                    grid_best = (v, p[0], p[1]);
                }
            }
        }
        assert!((grid_best.1 - 1.0).abs() < 1e-9 && (grid_best.2 - 1.0).abs() < 1e-9);

        let r = simplex_minimize(rosenbrock, &[-1.2, 1.0], &SimplexConfig::default()).unwrap();
        assert!(r.f < 1e-4, "f = {}", r.f);
        assert!((r.x[0] - 1.0).abs() < 1e-2 && (r.x[1] - 1.0).abs() < 1e-2);
    }

    #[test]
    fn truncation_is_flagged() {
        let cfg = SimplexConfig {
            max_iter: Some(3),
            ..SimplexConfig::default()
        };
        let f0 = rosenbrock(&[-1.2, 1.0]);
        let r = simplex_minimize(rosenbrock, &[-1.2, 1.0], &cfg).unwrap();
        assert!(r.truncated);
        assert_eq!(r.iterations, 3);
        assert!(r.f <= f0);
    }

    #[test]
    fn deterministic() {
        let a = simplex_minimize(rosenbrock, &[0.5, 0.5], &SimplexConfig::default()).unwrap();
        let b = simplex_minimize(rosenbrock, &[0.5, 0.5], &SimplexConfig::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = SimplexConfig {
            tol: 0.0,
            ..SimplexConfig::default()
        };
        assert!(simplex_minimize(|x| x[0], &[0.0], &cfg).is_err());
        assert!(simplex_minimize(|_| 0.0, &[], &SimplexConfig::default()).is_err());
    }

    #[test]
    fn nan_objective_is_avoided() {
        let r = simplex_minimize(
            |x| if x[0] < 0.0 { f64::NAN } else { (x[0] - 1.0).powi(2) },
            &[0.5],
            &SimplexConfig::default(),
        )
        .unwrap();
        assert!((r.x[0] - 1.0).abs() < 1e-6);
    }
}
