use crate::scalar::Real;

/// Gauss–Legendre nodes and weights on `[a, b]` (Newton iteration on `P_n`).
pub fn gauss_legendre<T: Real>(n: usize, a: T, b: T) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1, "at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize(n).unwrap();
    let half = (b - a) / T::int(2);
    let mid = (a + b) / T::int(2);
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root.
        let k = T::from_usize(i).unwrap();
        let mut x = (T::PI() * (k + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * T::int(4) {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = T::int(2) / ((T::one() - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = w * half;
        weights[n - 1 - i] = w * half;
    }
    (nodes, weights)
}

fn legendre<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::from_usize(k).unwrap();
        let p2 = ((T::int(2) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = T::from_usize(n).unwrap();
    let dp = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, dp)
}
