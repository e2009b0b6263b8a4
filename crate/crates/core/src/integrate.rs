//! Classical fourth-order Runge-Kutta on fixed-size state vectors.

/// One RK4 step of `y' = f(t, y)` from `t` to `t + h`.
pub fn rk4_step<const N: usize, F>(f: &F, t: f64, y: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    let offset = |k: &[f64; N], scale: f64| -> [f64; N] {
        let mut out = *y;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += scale * ki;
        }
        out
    };
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &offset(&k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &offset(&k2, 0.5 * h));
    let k4 = f(t + h, &offset(&k3, h));
    let mut out = *y;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Number of equal steps covering `duration` with no step longer than `max_step`.
pub fn step_count(duration: f64, max_step: f64) -> usize {
    ((duration / max_step).ceil() as usize).max(1)
}
