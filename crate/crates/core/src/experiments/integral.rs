use serde::{Deserialize, Serialize};

use super::{par_chunks, tags};
use crate::linalg::CMatrix;
use crate::sampler::sample_haar_unitary;
use crate::summation::NeumaierSum;
use crate::{Complex64, Error, RandomStream, Result};

/// Input state `X` of the dephasing twirl.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwirlInput {
    /// `|i⟩⟨i|` for the zero-based reference index `i`.
    BasisState(usize),
    /// `I/d`.
    MaximallyMixed,
}

impl TwirlInput {
    fn matrix(self, d: usize) -> Result<CMatrix> {
        match self {
            TwirlInput::BasisState(i) if i < d => {
                let mut x = CMatrix::zeros(d, d);
                x[(i, i)] = Complex64::new(1.0, 0.0);
                Ok(x)
            }
            TwirlInput::BasisState(i) => Err(Error::InvalidArgument(format!(
                "basis index {i} out of range for d = {d}"
            ))),
            TwirlInput::MaximallyMixed => {
                let mut x = CMatrix::identity(d);
                for j in 0..d {
                    x[(j, j)] /= d as f64;
                }
                Ok(x)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixIntegralReport {
    pub d: u64,
    pub n_unitaries: u64,
    pub input: TwirlInput,
    pub max_abs_deviation: f64,
    /// `5/√n`.
    pub tolerance: f64,
    pub passed: bool,
    pub master_seed: u64,
}

/// `(Tr X · I + X)/(d+1)`, the Haar twirl of the dephasing map applied to `X`.
pub fn twirl_closed_form(x: &CMatrix) -> CMatrix {
    let d = x.rows();
    let trace: Complex64 = (0..d).map(|i| x[(i, i)]).sum();
    let scale = 1.0 / (d as f64 + 1.0);
    CMatrix::from_fn(d, d, |i, j| {
        let id = if i == j { trace } else { Complex64::new(0.0, 0.0) };
        (id + x[(i, j)]) * scale
    })
}

/// `U† Π(U X U†) U` for one unitary.
fn dephasing_conjugate(u: &CMatrix, x: &CMatrix) -> CMatrix {
    let d = u.rows();
    let ux = u.matmul(x);
    // q_i = (U X U†)_ii
    let q: Vec<f64> = (0..d)
        .map(|i| (0..d).map(|k| ux[(i, k)] * u[(i, k)].conj()).sum::<Complex64>().re)
        .collect();
    CMatrix::from_fn(d, d, |j, k| {
        (0..d).map(|i| u[(i, j)].conj() * q[i] * u[(i, k)]).sum()
    })
}

/// Monte Carlo estimate of `∫ dμ(U) U† Π(U X U†) U` against the closed form.
pub fn run_matrix_integral_check(
    d: u64,
    n_unitaries: u64,
    master_seed: u64,
    input: TwirlInput,
) -> Result<MatrixIntegralReport> {
    if !(2..=16).contains(&d) {
        return Err(Error::Unsupported(format!(
            "matrix-integral check supports 2 <= d <= 16, got d = {d}"
        )));
    }
    if n_unitaries == 0 {
        return Err(Error::InvalidArgument("n_unitaries must be >= 1".into()));
    }
    let du = d as usize;
    let x = input.matrix(du)?;
    let partials = par_chunks(n_unitaries, |range| {
        let mut acc = vec![(NeumaierSum::new(), NeumaierSum::new()); du * du];
        for i in range {
            let u = sample_haar_unitary(du, RandomStream::family(master_seed, tags::UNITARIES, i))?;
            let y = dephasing_conjugate(u.matrix(), &x);
            for (a, z) in acc.iter_mut().zip(y.as_slice()) {
                a.0.add(z.re);
                a.1.add(z.im);
            }
        }
        Ok(acc)
    })?;
    let mut total = vec![(NeumaierSum::new(), NeumaierSum::new()); du * du];
    for part in &partials {
        for (t, p) in total.iter_mut().zip(part) {
            t.0.merge(&p.0);
            t.1.merge(&p.1);
        }
    }
    let n = n_unitaries as f64;
    let estimate = CMatrix::from_col_major(
        du,
        du,
        total
            .iter()
            .map(|(re, im)| Complex64::new(re.value() / n, im.value() / n))
            .collect(),
    )?;
    let max_abs_deviation = estimate.max_abs_diff(&twirl_closed_form(&x));
    let tolerance = 5.0 / n.sqrt();
    Ok(MatrixIntegralReport {
        d,
        n_unitaries,
        input,
        max_abs_deviation,
        tolerance,
        passed: max_abs_deviation < tolerance,
        master_seed,
    })
}
