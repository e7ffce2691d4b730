use nalgebra::DMatrix;

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation (denominator `n - 1`); zero for fewer than two values.
pub fn sample_std(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Column means and sample covariance (denominator `T - 1`) of a matrix
/// whose rows are observations.
pub fn sample_covariance(rows: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (t, d) = rows.shape();
    let means: Vec<f64> = (0..d).map(|j| rows.column(j).sum() / t as f64).collect();
    let mut cov = DMatrix::zeros(d, d);
    if t < 2 {
        return (means, cov);
    }
    for i in 0..d {
        for j in i..d {
            let mut acc = 0.0;
            for r in 0..t {
                acc += (rows[(r, i)] - means[i]) * (rows[(r, j)] - means[j]);
            }
            let c = acc / (t - 1) as f64;
            cov[(i, j)] = c;
            cov[(j, i)] = c;
        }
    }
    (means, cov)
}
