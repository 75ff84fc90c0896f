//! Deterministic 2-D Nelder–Mead for the population-equation fit.

/// Minimize `f` over two variables with a fixed starting simplex and
/// iteration budget; returns `(x, y, f(x,y))`.
pub fn nelder_mead_2d<F>(
    f: F,
    start: (f64, f64),
    h: f64,
    max_iters: usize,
    ftol: f64,
) -> (f64, f64, f64)
where
    F: Fn(f64, f64) -> f64,
{
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut simplex = [
        (start.0, start.1),
        (start.0 + h, start.1),
        (start.0, start.1 + h),
    ];
    let mut values = simplex.map(|(x, y)| f(x, y));

    for _ in 0..max_iters {
        // order ascending
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = [simplex[idx[0]], simplex[idx[1]], simplex[idx[2]]];
        values = [values[idx[0]], values[idx[1]], values[idx[2]]];
        if (values[2] - values[0]).abs() <= ftol {
            break;
        }
        let centroid = (
            (simplex[0].0 + simplex[1].0) / 2.0,
            (simplex[0].1 + simplex[1].1) / 2.0,
        );
        let refl = (
            centroid.0 + alpha * (centroid.0 - simplex[2].0),
            centroid.1 + alpha * (centroid.1 - simplex[2].1),
        );
        let fr = f(refl.0, refl.1);
        if fr < values[0] {
            let exp = (
                centroid.0 + gamma * (refl.0 - centroid.0),
                centroid.1 + gamma * (refl.1 - centroid.1),
            );
            let fe = f(exp.0, exp.1);
            if fe < fr {
                simplex[2] = exp;
                values[2] = fe;
            } else {
                simplex[2] = refl;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = refl;
            values[2] = fr;
        } else {
            let contr = (
                centroid.0 + rho * (simplex[2].0 - centroid.0),
                centroid.1 + rho * (simplex[2].1 - centroid.1),
            );
            let fc = f(contr.0, contr.1);
            if fc < values[2] {
                simplex[2] = contr;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = (
                        simplex[0].0 + sigma * (simplex[i].0 - simplex[0].0),
                        simplex[0].1 + sigma * (simplex[i].1 - simplex[0].1),
                    );
                    values[i] = f(simplex[i].0, simplex[i].1);
                }
            }
        }
    }
    let mut best = 0;
    for i in 1..3 {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].0, simplex[best].1, values[best])
}
