use crate::NumericsError;

/// Least-squares solution of the overdetermined system `rows · x ≈ b` by
/// Householder QR. Each row must have the same length n ≤ rows.len().
pub fn least_squares(rows: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>, NumericsError> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 || m < n || b.len() != m || rows.iter().any(|r| r.len() != n) {
        return Err(NumericsError::Domain(format!(
            "least squares needs m >= n > 0 consistent rows, got m = {m}, n = {n}"
        )));
    }
    // Column-major copy.
    let mut a: Vec<Vec<f64>> = (0..n).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let mut rhs = b.to_vec();
    for k in 0..n {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        let scale = a
            .iter()
            .map(|c| c.iter().map(|v| v.abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if norm <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(NumericsError::Domain(format!(
                "rank-deficient least-squares matrix at column {k}"
            )));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        for col in a.iter_mut().skip(k) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(x, y)| x * y).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, x) in col[k..].iter_mut().zip(&v) {
                *c -= f * x;
            }
        }
        let dot: f64 = v.iter().zip(&rhs[k..]).map(|(x, y)| x * y).sum();
        let f = 2.0 * dot / vnorm2;
        for (c, x) in rhs[k..].iter_mut().zip(&v) {
            *c -= f * x;
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[j][i] * x[j]).sum();
        x[i] = (rhs[i] - s) / a[i][i];
    }
    Ok(x)
}
