//! Normalization of `⟨·,·⟩_t` to the standard form, the conjugated
//! representation `ρ•_t`, its cocycle `u_t`, and the affine and
//! right-and-left actions built from them.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coxeter::{NormalForm, Word};
use crate::error::{Error, Result};
use crate::exact::{format_rational, symmetric_eigen, to_f64, Rational, RationalMatrix};
use crate::gram::{DeformedRep, GramFamily};
use crate::hpq::{LieElement, StandardForm};

/// Closest allowed approach of an eigenvalue `1 + tν` to zero.
const EXCEPTIONAL_MARGIN: f64 = 1e-10;

pub const IOTA_CONVENTION: &str = "U (P^1/2 + Q^1/2) V^T";

/// Eigendecomposition `N = V diag(ν) Vᵀ`, shared by every `t`.
#[derive(Debug, Clone)]
pub struct Frame {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<f64>,
}

impl Frame {
    pub fn new(fam: &GramFamily) -> Result<Self> {
        let e = symmetric_eigen(&fam.n().to_f64(), 1e-12)?;
        Ok(Self {
            eigenvalues: e.eigenvalues,
            eigenvectors: e.eigenvectors,
        })
    }
}

/// `ι_t` with `ι_tᵀ J ι_t = M_t`, its inverse and its `t`-derivative.
#[derive(Debug, Clone)]
pub struct Normalizer {
    pub t: Rational,
    pub iota: DMatrix<f64>,
    pub iota_inv: DMatrix<f64>,
    pub iota_dot: DMatrix<f64>,
    /// `(p, q+1)`: counts of positive and negative directions.
    pub signature: (usize, usize),
}

impl Normalizer {
    /// Row `r` of `ι_t` is `|1 + tν_π(r)|^{1/2} v_π(r)ᵀ`, where `π` lists the
    /// positive eigendirections first, each group in eigenvalue order.
    pub fn new(frame: &Frame, t: &Rational) -> Result<Self> {
        let tf = to_f64(t);
        let k = frame.eigenvalues.len();
        let shifted: Vec<f64> = frame.eigenvalues.iter().map(|nu| 1.0 + tf * nu).collect();
        if let Some(&bad) = shifted.iter().find(|x| x.abs() < EXCEPTIONAL_MARGIN) {
            return Err(Error::NearExceptional { value: bad });
        }
        let perm: Vec<usize> = (0..k)
            .filter(|&i| shifted[i] > 0.0)
            .chain((0..k).filter(|&i| shifted[i] < 0.0))
            .collect();
        let p = shifted.iter().filter(|&&x| x > 0.0).count();
        let v = &frame.eigenvectors;
        let mut iota = DMatrix::zeros(k, k);
        let mut iota_dot = DMatrix::zeros(k, k);
        let mut iota_inv = DMatrix::zeros(k, k);
        for (r, &i) in perm.iter().enumerate() {
            let root = shifted[i].abs().sqrt();
            let rate = shifted[i].signum() * frame.eigenvalues[i] / (2.0 * root);
            for c in 0..k {
                iota[(r, c)] = root * v[(c, i)];
                iota_dot[(r, c)] = rate * v[(c, i)];
                iota_inv[(c, r)] = v[(c, i)] / root;
            }
        }
        Ok(Self {
            t: t.clone(),
            iota,
            iota_inv,
            iota_dot,
            signature: (p, k - p),
        })
    }

    /// `diag(+1 × p, −1 × (q+1))`.
    pub fn j(&self) -> DMatrix<f64> {
        let (p, neg) = self.signature;
        DMatrix::from_fn(p + neg, p + neg, |i, j| match (i == j, i < p) {
            (false, _) => 0.0,
            (true, true) => 1.0,
            (true, false) => -1.0,
        })
    }

    /// The standard form, when the signature has at least one sign of each kind.
    pub fn form(&self) -> Result<StandardForm> {
        match self.signature {
            (p, neg) if p >= 1 && neg >= 1 => Ok(StandardForm::new(p, neg - 1)),
            sig => Err(Error::Construction(format!(
                "form of signature {sig:?} is definite"
            ))),
        }
    }

    /// Max-entry size of `ιᵀJι − M_t`.
    pub fn congruence_residual(&self, m_t: &RationalMatrix) -> f64 {
        (self.iota.transpose() * self.j() * &self.iota - m_t.to_f64()).amax()
    }
}

/// `ρ_t` together with its normalization into `O(p, q+1)`.
#[derive(Debug, Clone)]
pub struct NormalizedRep {
    pub rep: DeformedRep,
    pub norm: Normalizer,
    form: StandardForm,
    /// `ι_t⁻¹ ι̇_t = ½ M_t⁻¹ N`, exact since both factors are diagonal in the eigenbasis of `N`.
    drift: RationalMatrix,
}

/// Exact data of `ρ_t(w)` converted to floats.
#[derive(Debug, Clone)]
pub struct WordData {
    pub value: DMatrix<f64>,
    pub inverse: DMatrix<f64>,
    /// `d/dτ ρ_τ(w)` at `τ = t`.
    pub derivative: DMatrix<f64>,
    /// `(d/dτ ρ_τ(w)) ρ_t(w)⁻¹`, formed exactly before conversion.
    pub log_derivative: DMatrix<f64>,
    /// `ι⁻¹ u_t(w) ι`, formed exactly before conversion.
    pub cocycle_frame: DMatrix<f64>,
}

impl NormalizedRep {
    pub fn new(fam: &GramFamily, frame: &Frame, t: &Rational) -> Result<Self> {
        let rep = fam.deformed_rep(t);
        let norm = Normalizer::new(frame, t)?;
        let form = norm.form()?;
        let m_inv = rep
            .m_t
            .inverse()
            .ok_or_else(|| Error::Singular(format_rational(t)))?;
        let drift = (&m_inv * fam.n()).scale(&crate::exact::rat(1, 2));
        Ok(Self {
            rep,
            norm,
            form,
            drift,
        })
    }

    pub fn form(&self) -> StandardForm {
        self.form
    }

    pub fn t(&self) -> &Rational {
        &self.rep.t
    }

    pub fn drift(&self) -> &RationalMatrix {
        &self.drift
    }

    pub fn word_data(&self, w: &Word) -> WordData {
        let (value, derivative) = self.rep.represent_dual(w);
        let inverse = self.rep.represent(&w.inverse());
        let log_derivative = &derivative * &inverse;
        let frame = self.cocycle_exact_parts(&value, &inverse, &log_derivative);
        WordData {
            value: value.to_f64(),
            inverse: inverse.to_f64(),
            derivative: derivative.to_f64(),
            log_derivative: log_derivative.to_f64(),
            cocycle_frame: frame.to_f64(),
        }
    }

    /// By the product rule
    /// `u_t(w) = ι (B − ρ B ρ⁻¹ + ρ̇ ρ⁻¹) ι⁻¹` with `B = ι⁻¹ ι̇`;
    /// this returns the bracket, exactly.
    pub fn cocycle_exact(&self, w: &Word) -> RationalMatrix {
        let (value, derivative) = self.rep.represent_dual(w);
        let inverse = self.rep.represent(&w.inverse());
        let log_derivative = &derivative * &inverse;
        self.cocycle_exact_parts(&value, &inverse, &log_derivative)
    }

    fn cocycle_exact_parts(
        &self,
        value: &RationalMatrix,
        inverse: &RationalMatrix,
        log_derivative: &RationalMatrix,
    ) -> RationalMatrix {
        let conj = &(value * &self.drift) * inverse;
        &(&self.drift - &conj) + log_derivative
    }

    /// `ι ρ_t(w) ι⁻¹`.
    pub fn conjugated(&self, w: &Word) -> DMatrix<f64> {
        let g = self.rep.represent(w).to_f64();
        &self.norm.iota * g * &self.norm.iota_inv
    }

    pub fn conjugated_from(&self, data: &WordData) -> DMatrix<f64> {
        &self.norm.iota * &data.value * &self.norm.iota_inv
    }

    pub fn conjugated_inverse_from(&self, data: &WordData) -> DMatrix<f64> {
        &self.norm.iota * &data.inverse * &self.norm.iota_inv
    }

    /// `u_t(w) = d/dτ(ι_τ ρ_τ(w) ι_τ⁻¹) · (ι_t ρ_t(w) ι_t⁻¹)⁻¹`.
    pub fn cocycle(&self, w: &Word) -> LieElement {
        self.cocycle_from(&self.word_data(w))
    }

    pub fn cocycle_from(&self, data: &WordData) -> LieElement {
        LieElement(&self.norm.iota * &data.cocycle_frame * &self.norm.iota_inv)
    }

    /// `Ad(ρ•(a)) u(b)`, conjugated exactly before conversion. Forming the
    /// adjoint in floats loses about `ε‖ρ•(a)‖‖ρ•(a)⁻¹‖` relative accuracy.
    pub fn adjoint_cocycle(&self, a: &Word, b: &Word) -> LieElement {
        let value = self.rep.represent(a);
        let inverse = self.rep.represent(&a.inverse());
        let inner = &(&value * &self.cocycle_exact(b)) * &inverse;
        LieElement(&self.norm.iota * inner.to_f64() * &self.norm.iota_inv)
    }

    /// `Ad(ρ•(w)) y + u(w)`.
    pub fn affine_act(&self, w: &Word, y: &LieElement) -> LieElement {
        let data = self.word_data(w);
        let g = self.conjugated_from(&data);
        let g_inv = self.conjugated_inverse_from(&data);
        let u = self.cocycle_from(&data);
        LieElement(y.adjoint(&g, &g_inv).0 + u.0)
    }

    /// Lift of the normalized image of `v ∈ R^k`, i.e. `ι v`.
    pub fn push(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.norm.iota * v
    }

    pub fn pull(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.norm.iota_inv * x
    }
}

/// `ρ•_s(w) g ρ•_t(w)⁻¹`.
pub fn right_left_act(
    rep_t: &NormalizedRep,
    rep_s: &NormalizedRep,
    w: &Word,
    g: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    if rep_t.norm.signature != rep_s.norm.signature {
        return Err(Error::SignatureMismatch(
            rep_t.norm.signature,
            rep_s.norm.signature,
        ));
    }
    let inv_t = rep_t.conjugated(&w.inverse());
    Ok(rep_s.conjugated(w) * g * inv_t)
}

/// Signature of the Killing form of `o(p, q+1)`.
pub fn killing_form_signature(p: usize, q: usize) -> (usize, usize) {
    (p * (q + 1), (p * p + q * q + q - p) / 2)
}

/// Cocycle values cached by normal form.
#[derive(Debug, Clone)]
pub struct Cocycle {
    pub t: Rational,
    pub table: BTreeMap<NormalForm, LieElement>,
}

impl Cocycle {
    pub fn build(rep: &NormalizedRep, words: &[NormalForm]) -> Self {
        let table = words
            .iter()
            .map(|w| (w.clone(), rep.cocycle(&w.to_word())))
            .collect();
        Self {
            t: rep.t().clone(),
            table,
        }
    }

    pub fn export(&self, rep: &NormalizedRep, graph_json: &str) -> CocycleExport {
        let entries = self
            .table
            .iter()
            .map(|(w, u)| {
                let rows = (0..u.0.nrows())
                    .map(|i| u.0.row(i).iter().copied().collect())
                    .collect();
                (w.to_string(), rows)
            })
            .collect();
        CocycleExport {
            schema: 1,
            t: format_rational(&self.t),
            signature: rep.norm.signature,
            graph_hash: graph_hash(graph_json),
            iota_convention: IOTA_CONVENTION.to_string(),
            entries,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CocycleExport {
    pub schema: u32,
    pub t: String,
    pub signature: (usize, usize),
    pub graph_hash: String,
    pub iota_convention: String,
    pub entries: BTreeMap<String, Vec<Vec<f64>>>,
}

pub fn graph_hash(canonical_json: &str) -> String {
    Sha256::digest(canonical_json.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
