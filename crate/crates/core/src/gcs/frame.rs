//! The frame `theta^1..theta^4, conj(theta^1)..conj(theta^4)` of complex
//! 1-forms and computations expressed in it.

use crate::cdga::Presentation;
use crate::exterior::{Blade, Form, Polyvector};
use crate::linalg::Matrix;
use crate::scalars::CScalar;

use super::{build_rho, GcsData, GcsError};

/// Change of basis between `e^j` and the theta-frame. In frame coordinates
/// generator `a` (1-based) is `theta^a` for `a <= m` and `conj(theta^{a-m})`
/// after that.
pub struct ThetaFrame {
    m: usize,
    /// Frame 1-forms in the e-basis.
    forms: Vec<Form<CScalar>>,
    /// `e^j` in frame coordinates.
    inverse_images: Vec<Form<CScalar>>,
}

impl ThetaFrame {
    /// `None` if the thetas and their conjugates do not form a basis.
    pub fn new(thetas: &[Form<CScalar>]) -> Option<ThetaFrame> {
        let n = thetas.first()?.dim();
        let m = thetas.len();
        if 2 * m != n {
            return None;
        }
        let forms: Vec<Form<CScalar>> = thetas.iter().cloned().chain(thetas.iter().map(Form::conj)).collect();
        let rows: Vec<Vec<CScalar>> = forms
            .iter()
            .map(|f| (1..=n).map(|j| f.coefficient(Blade::generator(j))).collect())
            .collect();
        // forms[a] = sum_j M[a][j] e^j, so e^j = sum_a inv[j][a] forms[a].
        let inv = Matrix::from_rows(rows).inverse()?;
        let inverse_images = (0..n)
            .map(|j| {
                let mut f = Form::zero(n);
                for a in 0..n {
                    f.add_term(Blade::generator(a + 1), inv.get(j, a).clone());
                }
                f
            })
            .collect();
        Some(ThetaFrame { m, forms, inverse_images })
    }

    pub fn to_frame(&self, f: &Form<CScalar>) -> Form<CScalar> {
        f.apply_linear(&self.inverse_images).expect("square frame")
    }

    pub fn from_frame(&self, f: &Form<CScalar>) -> Form<CScalar> {
        f.apply_linear(&self.forms).expect("square frame")
    }

    /// The part of `f` built only from conjugate frame elements.
    pub fn antiholomorphic_part(&self, f: &Form<CScalar>, degree: usize) -> Form<CScalar> {
        let g = self.to_frame(f);
        let mut out = Form::zero(g.dim());
        for (b, c) in g.terms() {
            if b.grade() == degree && b.indices().all(|a| a > self.m) {
                out.add_term(*b, c.clone());
            }
        }
        out
    }

    /// `(0,2)` components of `d theta^a` in the frame, one per theta.
    pub fn zero_two_components(&self, p: &Presentation<CScalar>) -> Vec<Form<CScalar>> {
        self.forms[..self.m]
            .iter()
            .map(|t| self.antiholomorphic_part(&p.differential(t), 2))
            .collect()
    }
}

/// `(1 + i_{X3^X4}) theta^{1234}` against `exp(theta^{34}) ^ theta^{12}`.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaCheck {
    pub deformed: Form<CScalar>,
    pub type2_rho: Form<CScalar>,
    /// `+1` or `-1` when the two agree up to that sign, otherwise 0.
    pub sign: i8,
    /// The same identity holds after mapping back to the e-basis.
    pub e_basis_agrees: bool,
}

/// Frame dimension is taken from the type-4 thetas; `type2` must be the
/// `exp(theta^{34}) ^ theta^{12}` structure built from them.
pub fn beta_check(frame: &ThetaFrame, type2: &GcsData<CScalar>) -> Result<BetaCheck, GcsError> {
    let n = 2 * frame.m;
    let top = Form::wedge_of(n, &[1, 2, 3, 4], CScalar::from_int(1));
    let beta = Polyvector::basis_vector(n, 3).wedge(&Polyvector::basis_vector(n, 4))?;
    let deformed = &top + &top.contract(&beta)?;
    let rho = build_rho(type2)?;
    let type2_rho = frame.to_frame(&rho);
    let sign = if deformed == type2_rho {
        1
    } else if deformed == -&type2_rho {
        -1
    } else {
        0
    };
    let back = frame.from_frame(&deformed);
    let e_basis_agrees = sign != 0 && back == rho.scale(&CScalar::from_int(sign as i64));
    Ok(BetaCheck {
        deformed,
        type2_rho,
        sign,
        e_basis_agrees,
    })
}
