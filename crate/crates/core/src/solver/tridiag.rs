/// Thomas-algorithm workspace for the solver's tridiagonal stages.
///
/// Both stages assemble strictly diagonally dominant systems, so no pivoting
/// is needed. Buffers are reused across steps.
#[derive(Debug, Default)]
pub(crate) struct Tridiag {
    c_prime: Vec<f64>,
    d_prime: Vec<f64>,
}

impl Tridiag {
    pub fn new() -> Self {
        Tridiag::default()
    }

    /// Solve `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`
    /// in place of `out`. `lower[0]` and `upper[n-1]` are ignored.
    pub fn solve(
        &mut self,
        lower: &[f64],
        diag: &[f64],
        upper: &[f64],
        rhs: &[f64],
        out: &mut [f64],
    ) {
        let n = diag.len();
        assert!(n > 0);
        assert_eq!(lower.len(), n);
        assert_eq!(upper.len(), n);
        assert_eq!(rhs.len(), n);
        assert_eq!(out.len(), n);
        self.c_prime.resize(n, 0.0);
        self.d_prime.resize(n, 0.0);

        self.c_prime[0] = upper[0] / diag[0];
        self.d_prime[0] = rhs[0] / diag[0];
        for i in 1..n {
            let den = diag[i] - lower[i] * self.c_prime[i - 1];
            debug_assert!(den != 0.0, "singular tridiagonal pivot at row {i}");
            if i < n - 1 {
                self.c_prime[i] = upper[i] / den;
            }
            self.d_prime[i] = (rhs[i] - lower[i] * self.d_prime[i - 1]) / den;
        }
        out[n - 1] = self.d_prime[n - 1];
        for i in (0..n - 1).rev() {
            out[i] = self.d_prime[i] - self.c_prime[i] * out[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_system() {
        let mut ws = Tridiag::new();
        let n = 5;
        let d = vec![1.0, 2.0, 3.0, 4.0, 5.0];
        let mut x = vec![0.0; n];
        ws.solve(&vec![0.0; n], &vec![1.0; n], &vec![0.0; n], &d, &mut x);
        assert_eq!(x, d);
    }

    #[test]
    fn zero_rhs_gives_zero_exactly() {
        let mut ws = Tridiag::new();
        let n = 16;
        let lower = vec![-0.4; n];
        let diag = vec![1.9; n];
        let upper = vec![-0.4; n];
        let mut x = vec![1.0; n];
        ws.solve(&lower, &diag, &upper, &vec![0.0; n], &mut x);
        assert!(x.iter().all(|&xi| xi == 0.0));
    }

    #[test]
    fn laplacian_system_residual() {
        let mut ws = Tridiag::new();
        let n = 64;
        let mut lower = vec![-1.0; n];
        let mut upper = vec![-1.0; n];
        lower[0] = 0.0;
        upper[n - 1] = 0.0;
        let diag = vec![2.5; n];
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        let mut x = vec![0.0; n];
        ws.solve(&lower, &diag, &upper, &rhs, &mut x);
        for i in 0..n {
            let mut ax = diag[i] * x[i];
            if i > 0 {
                ax += lower[i] * x[i - 1];
            }
            if i < n - 1 {
                ax += upper[i] * x[i + 1];
            }
            assert!((ax - rhs[i]).abs() < 1e-13, "row {i}");
        }
    }
}
