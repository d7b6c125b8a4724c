/// Spherical Bessel functions j_0(x) .. j_{n-1}(x), written into `out`.
///
/// Uses the power series for |x| < 1, upward recurrence when |x| exceeds
/// the highest order and Miller's downward recurrence in between.
pub fn spherical_bessel_j(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let ax = x.abs();
    if ax < 1.0 {
        series(ax, out);
    } else if ax >= n as f64 {
        upward(ax, out);
    } else {
        miller(ax, out);
    }
    if x < 0.0 {
        for (k, v) in out.iter_mut().enumerate() {
            if k % 2 == 1 {
                *v = -*v;
            }
        }
    }
}

fn series(x: f64, out: &mut [f64]) {
    let h = -0.5 * x * x;
    // x^n / (2n+1)!!
    let mut lead = 1.0;
    for (k, v) in out.iter_mut().enumerate() {
        if k > 0 {
            lead *= x / (2 * k + 1) as f64;
        }
        let kk = k as f64;
        let mut term = 1.0;
        let mut sum = 1.0;
        for m in 1..40 {
            let mf = m as f64;
            term *= h / (mf * (2.0 * kk + 2.0 * mf + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        *v = lead * sum;
    }
}

fn upward(x: f64, out: &mut [f64]) {
    let (s, c) = x.sin_cos();
    out[0] = s / x;
    if out.len() > 1 {
        out[1] = s / (x * x) - c / x;
    }
    for k in 2..out.len() {
        out[k] = (2 * k - 1) as f64 / x * out[k - 1] - out[k - 2];
    }
}

fn miller(x: f64, out: &mut [f64]) {
    let n = out.len();
    let start = n + 20 + x as usize;
    let mut next = 0.0; // f_{k+1}
    let mut cur = 1e-300; // f_k
    for k in (1..=start).rev() {
        let prev = (2 * k + 1) as f64 / x * cur - next;
        next = cur;
        cur = prev;
        // cur now holds f_{k-1}
        if k - 1 < n {
            out[k - 1] = cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            for v in out.iter_mut().skip(k - 1) {
                *v *= 1e-250;
            }
        }
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    let scale = if j0.abs() >= j1.abs() || n < 2 {
        j0 / out[0]
    } else {
        j1 / out[1]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
}
