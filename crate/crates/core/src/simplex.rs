//! Nelder–Mead downhill simplex minimization.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions<T> {
    /// Stop once every vertex lies within this Euclidean distance of the best one.
    pub diameter_tolerance: T,
    pub max_iterations: usize,
    pub reflection: T,
    pub expansion: T,
    pub contraction: T,
    pub shrink: T,
}

impl<T: Real> Default for SimplexOptions<T> {
    fn default() -> Self {
        Self {
            diameter_tolerance: T::lit(1e-10),
            max_iterations: 500,
            reflection: T::one(),
            expansion: T::lit(2.0),
            contraction: T::lit(0.5),
            shrink: T::lit(0.5),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexResult<T, const N: usize> {
    pub x: [T; N],
    pub f: T,
    pub iterations: usize,
    pub evaluations: usize,
    pub diameter: T,
    /// The diameter tolerance was met before the iteration limit.
    pub converged: bool,
}

/// Minimizes `f` from `x0` with an initial simplex spanned by `x0 + steps[i] e_i`.
pub fn minimize<T, const N: usize, F>(
    mut f: F,
    x0: [T; N],
    steps: [T; N],
    opts: &SimplexOptions<T>,
) -> SimplexResult<T, N>
where
    T: Real,
    F: FnMut(&[T; N]) -> T,
{
    let mut evaluations = 0usize;
    let mut eval = |x: &[T; N]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            T::infinity()
        } else {
            v
        }
    };

    let mut vertices: Vec<([T; N], T)> = Vec::with_capacity(N + 1);
    vertices.push((x0, eval(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] = x[i] + steps[i];
        let fx = eval(&x);
        vertices.push((x, fx));
    }

    let order = |v: &mut Vec<([T; N], T)>| {
        v.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
    };
    let diameter = |v: &[([T; N], T)]| {
        let best = v[0].0;
        v[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&best)
                    .map(|(a, b)| (*a - *b) * (*a - *b))
                    .sum::<T>()
                    .sqrt()
            })
            .fold(T::zero(), |m, d| m.max(d))
    };
    let lerp = |from: &[T; N], to: &[T; N], t: T| -> [T; N] {
        std::array::from_fn(|i| from[i] + t * (to[i] - from[i]))
    };

    let mut iterations = 0;
    order(&mut vertices);
    let mut diam = diameter(&vertices);
    while iterations < opts.max_iterations && diam >= opts.diameter_tolerance {
        iterations += 1;
        let n = T::from_usize(N).unwrap();
        let centroid: [T; N] =
            std::array::from_fn(|i| vertices[..N].iter().map(|(x, _)| x[i]).sum::<T>() / n);
        let (worst, f_worst) = vertices[N];
        let f_best = vertices[0].1;
        let f_second_worst = vertices[N - 1].1;

        let reflected = lerp(&centroid, &worst, -opts.reflection);
        let f_reflected = eval(&reflected);

        if f_reflected < f_best {
            let expanded = lerp(&centroid, &worst, -opts.reflection * opts.expansion);
            let f_expanded = eval(&expanded);
            vertices[N] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < f_second_worst {
            vertices[N] = (reflected, f_reflected);
        } else {
            // Outside contraction when the reflection improved on the worst point.
            let (target, f_target) = if f_reflected < f_worst {
                (reflected, f_reflected)
            } else {
                (worst, f_worst)
            };
            let contracted = lerp(&centroid, &target, opts.contraction);
            let f_contracted = eval(&contracted);
            if f_contracted < f_target {
                vertices[N] = (contracted, f_contracted);
            } else {
                let best = vertices[0].0;
                for v in vertices.iter_mut().skip(1) {
                    let x = lerp(&best, &v.0, opts.shrink);
                    *v = (x, eval(&x));
                }
            }
        }
        order(&mut vertices);
        diam = diameter(&vertices);
    }

    let (x, fx) = vertices[0];
    SimplexResult {
        x,
        f: fx,
        iterations,
        evaluations,
        diameter: diam,
        converged: diam < opts.diameter_tolerance,
    }
}
