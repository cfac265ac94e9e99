use crate::error::{Error, Result};
use crate::numlin::{intersect, Subspace, Tolerances};
use crate::semigroups::{PairOfSemigroups, WindowedMap};

use super::wold::{reduction_residual, wold_cooper, WoldResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairClass {
    DoublyCommuting,
    Commuting,
    Neither,
}

impl PairClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairClass::DoublyCommuting => "doubly_commuting",
            PairClass::Commuting => "commuting",
            PairClass::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CommutationReport {
    /// Worst `‖V₁,ₛV₂,ₜ − V₂,ₜV₁,ₛ‖` over the sample pairs.
    pub comm_residual: f64,
    /// Worst `‖V₁,ₛV₂,ₜ* − V₂,ₜ*V₁,ₛ‖` over the sample pairs.
    pub double_comm_residual: f64,
    /// Fewest faithful columns any single comparison was made on.
    pub compared: usize,
    pub classified: PairClass,
}

fn compare(lhs: &WindowedMap, rhs: &WindowedMap, what: &str) -> Result<(f64, usize)> {
    let (res, cols) = lhs.faithful_residual(rhs)?;
    if cols == 0 {
        return Err(Error::WindowTooSmall(format!("no common faithful columns for {what}")));
    }
    Ok((res, cols))
}

/// Commutation and adjoint-commutation residuals over every pair of sample
/// times (in grid steps).
pub fn classify_pair(pair: &PairOfSemigroups, samples: &[usize], tol: &Tolerances) -> Result<CommutationReport> {
    tol.validate()?;
    if samples.is_empty() {
        return Err(Error::InvalidInput("no sample times".into()));
    }
    let (mut comm, mut dcomm, mut compared) = (0.0f64, 0.0f64, usize::MAX);
    for &s in samples {
        let a = pair.first.element(s)?;
        for &t in samples {
            let b = pair.second.element(t)?;
            let (r, c) = compare(&a.compose(&b)?, &b.compose(&a)?, "the commutator")?;
            comm = comm.max(r);
            compared = compared.min(c);
            let bs = b.adjoint();
            let (r, c) = compare(&a.compose(&bs)?, &bs.compose(&a)?, "the adjoint commutator")?;
            dcomm = dcomm.max(r);
            compared = compared.min(c);
        }
    }
    let classified = if comm > tol.resid_abs {
        PairClass::Neither
    } else if dcomm > tol.resid_abs {
        PairClass::Commuting
    } else {
        PairClass::DoublyCommuting
    };
    Ok(CommutationReport {
        comm_residual: comm,
        double_comm_residual: dcomm,
        compared,
        classified,
    })
}

/// The four joint parts of a doubly commuting pair: `pp`, `pu`, `up`, `uu`
/// where the first letter refers to the first family (`p` = c.n.u.).
#[derive(Clone, Debug)]
pub struct FourfoldResult {
    pub h_pp: Subspace,
    pub h_pu: Subspace,
    pub h_up: Subspace,
    pub h_uu: Subspace,
    /// Worst reduction residual of each part (same order as the parts)
    /// against every sampled member of both families.
    pub reduction_residuals: [f64; 4],
    pub first: WoldResult,
    pub second: WoldResult,
}

impl FourfoldResult {
    pub fn parts(&self) -> [&Subspace; 4] {
        [&self.h_pp, &self.h_pu, &self.h_up, &self.h_uu]
    }

    pub fn dims(&self) -> [usize; 4] {
        self.parts().map(|p| p.dim())
    }

    pub fn stabilized(&self) -> bool {
        self.first.stabilized && self.second.stabilized
    }
}

pub fn fourfold_decompose(
    pair: &PairOfSemigroups,
    k_max: usize,
    samples: &[usize],
    tol: &Tolerances,
) -> Result<FourfoldResult> {
    let class = classify_pair(pair, samples, tol)?;
    if class.classified != PairClass::DoublyCommuting {
        return Err(Error::PreconditionFailed(format!(
            "pair is {} (adjoint-commutator residual {:e}), not doubly commuting",
            class.classified.as_str(),
            class.double_comm_residual
        )));
    }
    let w1 = wold_cooper(&pair.first, k_max, tol)?;
    let w2 = wold_cooper(&pair.second, k_max, tol)?;
    let h_pp = intersect(&w1.cnu_part, &w2.cnu_part, tol)?;
    let h_pu = intersect(&w1.cnu_part, &w2.unitary_part, tol)?;
    let h_up = intersect(&w1.unitary_part, &w2.cnu_part, tol)?;
    let h_uu = intersect(&w1.unitary_part, &w2.unitary_part, tol)?;
    let mut members = Vec::new();
    for &s in samples {
        members.push(pair.first.element(s)?);
        members.push(pair.second.element(s)?);
    }
    let mut reduction_residuals = [0.0; 4];
    for (slot, part) in reduction_residuals.iter_mut().zip([&h_pp, &h_pu, &h_up, &h_uu]) {
        for member in &members {
            *slot = f64::max(*slot, reduction_residual(part, member)?.0);
        }
    }
    Ok(FourfoldResult {
        h_pp,
        h_pu,
        h_up,
        h_uu,
        reduction_residuals,
        first: w1,
        second: w2,
    })
}
