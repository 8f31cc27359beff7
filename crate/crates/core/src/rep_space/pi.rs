use super::*;

/// The bivector `Π = Π_{r_AM} + Π_{L,m} + Π_{R,m}` on `Mat_N^n`, acting on
/// gradients `grad[l][(a, b)] = ∂F/∂(X_l)_{ab}`.
#[derive(Debug, Clone)]
pub struct PiBivector {
    x: MatrixTuple,
    m: usize,
    /// Taylor coefficients of `r_AM`.
    r_am: Vec<f64>,
}

impl PiBivector {
    /// `r_AM(ad_{X_m})` is truncated at `degree`.
    pub fn new(x: &MatrixTuple, m: usize, degree: usize) -> Result<Self> {
        if m >= x.n() {
            return Err(Error::OutOfRange(format!("generator {m} out of range for n = {}", x.n())));
        }
        let r = r_am_series::<C>(1, 0, degree)?;
        let r_am = (0..=degree).map(|k| coeff_of(&r, &vec![0; k]).re).collect();
        Ok(PiBivector { x: x.clone(), m, r_am })
    }

    /// `r_AM(ad_{X_m})(y)`.
    pub fn r_am_ad(&self, y: &Mat) -> Mat {
        let xm = self.x.get(self.m);
        let mut term = y.clone();
        let mut out = y * C::from(self.r_am[0]);
        for c in &self.r_am[1..] {
            term = xm * &term - &term * xm;
            out += &term * C::from(*c);
        }
        out
    }

    /// `Σ_l [X_l, ∇_l F]` with the transposed gradient `(∇_l F)_{ba}`: the
    /// infinitesimal conjugation action written as a matrix.
    fn action(&self, grad: &[Mat]) -> Mat {
        let n = self.x.size();
        let mut out = Mat::zeros(n, n);
        for (xl, g) in self.x.mats().iter().zip(grad) {
            let gt = g.transpose();
            out += xl * &gt - &gt * xl;
        }
        out
    }

    pub fn r_am_part(&self, gf: &[Mat], gg: &[Mat]) -> C {
        -(self.r_am_ad(&self.action(gg)) * self.action(gf)).trace()
    }

    pub fn left_part(&self, gf: &[Mat], gg: &[Mat]) -> C {
        (self.action(gg) * gf[self.m].transpose()).trace()
    }

    pub fn right_part(&self, gf: &[Mat], gg: &[Mat]) -> C {
        -(gg[self.m].transpose() * self.action(gf)).trace()
    }

    pub fn apply(&self, gf: &[Mat], gg: &[Mat]) -> C {
        self.r_am_part(gf, gg) + self.left_part(gf, gg) + self.right_part(gf, gg)
    }

    /// `Π(F, G)` with finite-difference gradients.
    pub fn apply_fns<F, G>(&self, f: F, g: G) -> C
    where
        F: Fn(&MatrixTuple) -> C,
        G: Fn(&MatrixTuple) -> C,
    {
        self.apply(&gradient(f, &self.x), &gradient(g, &self.x))
    }
}

/// The diagonal `gl_N` action `𝒳^{ab}F = Σ_{l,c} (X_l)_{ac} ∂F/∂(X_l)_{cb} − (X_l)_{cb} ∂F/∂(X_l)_{ac}`
/// as the matrix of its values.
pub fn gl_action(x: &MatrixTuple, grad: &[Mat]) -> Mat {
    let n = x.size();
    let mut out = Mat::zeros(n, n);
    for (xl, g) in x.mats().iter().zip(grad) {
        out += xl * g - g * xl;
    }
    out
}
