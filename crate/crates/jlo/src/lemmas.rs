//! The bracket identities: unit insertion, merge/unmerge against a
//! [D^2,..]-insertion, rotation with rescaling, the contraction cochains and
//! the derivative identity along operator families.

use ndarray::Array1;
use num_complex::Complex64;

use models::linalg::{self, CMat};
use models::ModelTriple;

use crate::bracket::{
    d2_commutator_entry, eval_bracket, eval_bracket_core, BracketEntry, JloError,
};

/// Operator family: rescaling D or flattening it toward its phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Family {
    /// D_t = t D, t > 0.
    Scale,
    /// D_u = D |D|^{-u}, u in [0, 1].
    Phase,
}

/// Family data at a parameter value: the operator, its square's diagonal,
/// its parameter derivative, and the graded bracket [D_tau, Ddot_tau]
/// (an anticommutator of odd operators).
pub struct FamilyOps {
    pub d_mat: CMat,
    pub d2: Array1<f64>,
    pub ddot: CMat,
    pub bracket_v: CMat,
}

pub fn family_at(m: &ModelTriple, family: Family, tau: f64) -> Result<FamilyOps, JloError> {
    let d = m
        .d_diag()
        .cloned()
        .ok_or(JloError::BadFamilyParameter(tau))?;
    match family {
        Family::Scale => {
            if !(tau > 0.0) {
                return Err(JloError::BadFamilyParameter(tau));
            }
            let dt = d.mapv(|x| tau * x);
            Ok(FamilyOps {
                d_mat: linalg::from_diag(&dt),
                d2: dt.mapv(|x| x * x),
                ddot: linalg::from_diag(&d),
                bracket_v: linalg::from_diag(&d.mapv(|x| 2.0 * tau * x * x)),
            })
        }
        Family::Phase => {
            if !(0.0..=1.0).contains(&tau) {
                return Err(JloError::BadFamilyParameter(tau));
            }
            let du = d.mapv(|x| x * x.abs().powf(-tau));
            let ddot = d.mapv(|x| -x * x.abs().powf(-tau) * x.abs().ln());
            let brv = Array1::from_shape_fn(d.len(), |i| 2.0 * du[i] * ddot[i]);
            Ok(FamilyOps {
                d_mat: linalg::from_diag(&du),
                d2: du.mapv(|x| x * x),
                ddot: linalg::from_diag(&ddot),
                bracket_v: linalg::from_diag(&brv),
            })
        }
    }
}

/// Twisted commutator entry against an explicit operator matrix.
pub fn commutator_with(d_mat: &CMat, a: &BracketEntry) -> BracketEntry {
    let left = linalg::matmul(d_mat, &a.op);
    let right = linalg::matmul(&a.op, d_mat).mapv(|x| x * a.mu);
    BracketEntry {
        op: linalg::sub(&left, &right),
        mu: a.mu,
    }
}

/// Entries of the degree-q cochain on crossed-monomial slots:
/// `(A0, [D, s^-1(A1)], .., [D, s^-q(Aq)])`.
pub fn j_entries(d_mat: &CMat, slots: &[BracketEntry]) -> Vec<BracketEntry> {
    let mut out = vec![slots[0].clone()];
    for (i, a) in slots.iter().enumerate().skip(1) {
        out.push(commutator_with(d_mat, &a.sigma_pow(-(i as i64))));
    }
    out
}

/// Value of the degree-q cochain at family parameter tau.
pub fn j_cochain(
    m: &ModelTriple,
    slots: &[BracketEntry],
    family: Family,
    tau: f64,
) -> Result<Complex64, JloError> {
    let fam = family_at(m, family, tau)?;
    let entries = j_entries(&fam.d_mat, slots);
    Ok(eval_bracket_core(&fam.d2, m.grading.as_ref(), &entries, 1.0)?.value)
}

/// Value of the degree-q cochain against the model's own operator at heat
/// parameter t; works for the doubled models too (diagonal square).
pub fn j_cochain_at(m: &ModelTriple, slots: &[BracketEntry], t: f64) -> Result<Complex64, JloError> {
    let entries = j_entries(&m.d_matrix(), slots);
    Ok(eval_bracket(m, &entries, t)?.value)
}

/// Unit-insertion residual: `<e0,..,eq> - sum_k <e0,..,1,e_k,..,eq>`.
pub fn check_unit_insertion(
    m: &ModelTriple,
    entries: &[BracketEntry],
    t: f64,
) -> Result<f64, JloError> {
    let lhs = eval_bracket(m, entries, t)?.value;
    let one = BracketEntry::plain(linalg::identity(m.outer_dim));
    let mut rhs = Complex64::new(0.0, 0.0);
    for k in 0..entries.len() {
        let mut with_unit = entries.to_vec();
        with_unit.insert(k, one.clone());
        rhs += eval_bracket(m, &with_unit, t)?.value;
    }
    Ok((lhs - rhs).norm())
}

/// Merge/unmerge residual at slot j:
/// `<..,e_{j-1} e_j, e_{j+1},..> - <..,e_{j-1}, e_j e_{j+1},..>
///  - <s^2 e_0,..,s^2 e_{j-1}, [D^2, e_j], e_{j+1},..>`.
pub fn check_merge_unmerge(
    m: &ModelTriple,
    entries: &[BracketEntry],
    j: usize,
    t: f64,
) -> Result<f64, JloError> {
    let q = entries.len() - 1;
    assert!(j >= 1 && j < q, "interior slot required");
    let mut merged_left: Vec<BracketEntry> = Vec::new();
    merged_left.extend_from_slice(&entries[..j - 1]);
    merged_left.push(entries[j - 1].product(&entries[j]));
    merged_left.extend_from_slice(&entries[j + 1..]);
    let mut merged_right: Vec<BracketEntry> = Vec::new();
    merged_right.extend_from_slice(&entries[..j]);
    merged_right.push(entries[j].product(&entries[j + 1]));
    merged_right.extend_from_slice(&entries[j + 2..]);
    let mut inserted: Vec<BracketEntry> = Vec::new();
    for e in &entries[..j] {
        inserted.push(e.sigma_pow(2));
    }
    inserted.push(d2_commutator_entry(m, &entries[j]));
    inserted.extend_from_slice(&entries[j + 1..]);
    let lhs1 = eval_bracket(m, &merged_left, t)?.value;
    let lhs2 = eval_bracket(m, &merged_right, t)?.value;
    let rhs = eval_bracket(m, &inserted, t)?.value;
    Ok((lhs1 - lhs2 - rhs).norm())
}

/// Rotation-with-rescaling residual, valid when the total character is
/// trivial: `<e0,..,eq>(eps) - <e1,..,eq,s^{-deg}(e0)>(mu(e0)^2 eps)`.
pub fn check_rotation_rescaling(
    m: &ModelTriple,
    entries: &[BracketEntry],
    degree: i64,
    eps: f64,
) -> Result<f64, JloError> {
    let lhs = crate::bracket::eval_bracket_epsilon(m, entries, eps, degree)?.value;
    let mut rotated: Vec<BracketEntry> = entries[1..].to_vec();
    rotated.push(entries[0].sigma_pow(-degree));
    let mu0 = entries[0].mu;
    let rhs =
        crate::bracket::eval_bracket_epsilon(m, &rotated, mu0 * mu0 * eps, degree)?.value;
    Ok((lhs - rhs).norm() / (lhs.norm() + 1e-300))
}

/// Entry parity for the contraction signs.
#[derive(Clone, Copy, PartialEq)]
pub enum EntryParity {
    Even,
    Odd,
}

/// Twisted contraction: inserts V after each position k with the sign
/// `(-1)^{(p0+..+pk) pV}` and twists the entries left of the insertion.
pub fn contract(
    m: &ModelTriple,
    entries: &[BracketEntry],
    parities: &[EntryParity],
    v: &BracketEntry,
    v_parity: EntryParity,
    d2: &Array1<f64>,
) -> Result<Complex64, JloError> {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut parity_sum = 0usize;
    for k in 0..entries.len() {
        parity_sum += usize::from(parities[k] == EntryParity::Odd);
        let sign = if v_parity == EntryParity::Odd && parity_sum % 2 == 1 {
            -1.0
        } else {
            1.0
        };
        let mut with_v: Vec<BracketEntry> = Vec::with_capacity(entries.len() + 1);
        for e in &entries[..=k] {
            with_v.push(e.sigma_pow(2));
        }
        with_v.push(v.clone());
        with_v.extend_from_slice(&entries[k + 1..]);
        let val = eval_bracket_core(d2, m.grading.as_ref(), &with_v, 1.0)?.value;
        acc += sign * val;
    }
    Ok(acc)
}

/// The contraction cochain at family parameter tau with V = Ddot (odd) or
/// V = [D_tau, Ddot] (even).
pub fn jbar_cochain(
    m: &ModelTriple,
    slots: &[BracketEntry],
    family: Family,
    tau: f64,
    odd_v: bool,
) -> Result<Complex64, JloError> {
    let fam = family_at(m, family, tau)?;
    let entries = j_entries(&fam.d_mat, slots);
    let mut parities = vec![EntryParity::Even];
    parities.extend(std::iter::repeat(EntryParity::Odd).take(slots.len() - 1));
    let (v, vp) = if odd_v {
        (BracketEntry::plain(fam.ddot.clone()), EntryParity::Odd)
    } else {
        (BracketEntry::plain(fam.bracket_v.clone()), EntryParity::Even)
    };
    contract(m, &entries, &parities, &v, vp, &fam.d2)
}

/// The derivative-compensating cochain: the sum of brackets with one
/// commutator entry differentiated.
pub fn k_cochain(
    m: &ModelTriple,
    slots: &[BracketEntry],
    family: Family,
    tau: f64,
) -> Result<Complex64, JloError> {
    let fam = family_at(m, family, tau)?;
    let entries = j_entries(&fam.d_mat, slots);
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 1..slots.len() {
        let mut modified = entries.clone();
        modified[j] = commutator_with(&fam.ddot, &slots[j].sigma_pow(-(j as i64)));
        acc += eval_bracket_core(&fam.d2, m.grading.as_ref(), &modified, 1.0)?.value;
    }
    Ok(acc)
}

/// Central finite-difference residual of
/// `d/dtau J^q(D_tau) = K^q(D_tau) - Jbar^q(D_tau, [D_tau, Ddot])`.
pub fn check_derivative_identity(
    m: &ModelTriple,
    slots: &[BracketEntry],
    family: Family,
    tau: f64,
    rel_step: f64,
) -> Result<f64, JloError> {
    let h = rel_step * tau.max(1e-3);
    let plus = j_cochain(m, slots, family, tau + h)?;
    let minus = j_cochain(m, slots, family, tau - h)?;
    let fd = (plus - minus) / (2.0 * h);
    let k = k_cochain(m, slots, family, tau)?;
    let jb = jbar_cochain(m, slots, family, tau, false)?;
    let rhs = k - jb;
    Ok((fd - rhs).norm() / (rhs.norm() + fd.norm() + 1e-300))
}

/// Hochschild coboundary of the degree-(q-1) cochain at heat parameter t.
pub fn b_of_j(m: &ModelTriple, slots: &[BracketEntry], t: f64) -> Result<Complex64, JloError> {
    let q = slots.len() - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..q {
        let mut merged: Vec<BracketEntry> = Vec::new();
        merged.extend_from_slice(&slots[..i]);
        merged.push(slots[i].product(&slots[i + 1]));
        merged.extend_from_slice(&slots[i + 2..]);
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * j_cochain_at(m, &merged, t)?;
    }
    let mut wrap: Vec<BracketEntry> = Vec::new();
    wrap.push(slots[q].product(&slots[0]));
    wrap.extend_from_slice(&slots[1..q]);
    let sign = if (q + 1) % 2 == 0 { 1.0 } else { -1.0 };
    acc += sign * j_cochain_at(m, &wrap, t)?;
    Ok(acc)
}

/// Cyclic coboundary of the degree-(q+1) cochain at heat parameter t.
pub fn big_b_of_j(m: &ModelTriple, slots: &[BracketEntry], t: f64) -> Result<Complex64, JloError> {
    let q = slots.len() - 1;
    let one = BracketEntry::plain(linalg::identity(m.outer_dim));
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..=q {
        let mut rearranged: Vec<BracketEntry> = Vec::with_capacity(q + 2);
        rearranged.push(one.clone());
        for j in 0..=q {
            rearranged.push(slots[(k + j) % (q + 1)].clone());
        }
        let sign = if (k * q) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * j_cochain_at(m, &rearranged, t)?;
    }
    Ok(acc)
}
