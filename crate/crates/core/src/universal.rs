//! The universal tame product `H_inf = ∏ H_n` and embeddings of tame
//! products into it.
//!
//! `H_0 = A_inf` and, for `m >= 1`,
//! `H_m = Z(p_0^inf) (+) ... (+) Z(p_{m-1}^inf) (+) (+)_{i >= m} Z(p_i^inf)^{<w}`.
//! A tame product `∏ G_n` is cut into blocks `L_k` at the indices `n_k` past
//! which every factor is `p_k`-compact, and block `L_n` is placed inside
//! `K_n = A_n × ∏_{N_n <= i < N_{n+1}} H_i`.

use serde::Serialize;
use thiserror::Error;

use crate::abelian::primes::nth_prime;
use crate::abelian::{
    divisible_hull, embeds, AbelianError, DivNormalForm, EmbedCertificate, GroupExpr, Multiplicity,
};
use crate::classify::{classify_product, ClassifyError, SeqSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("the product is not tame")]
    NotTame,
    #[error("horizon {0} is below the minimum of 2")]
    HorizonTooSmall(usize),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

pub fn a_infinity() -> GroupExpr {
    GroupExpr::AInfinity
}

/// `A_0 = 0`, `A_n = (+)_{i >= n} Z(p_i^inf)^{<w}`.
pub fn a_n(n: usize) -> GroupExpr {
    match n {
        0 => GroupExpr::Zero,
        _ => GroupExpr::PrimeTail { from: n },
    }
}

/// The factor `H_m` of `H_inf`.
pub fn h_infinity(m: usize) -> GroupExpr {
    match m {
        0 => GroupExpr::AInfinity,
        _ => GroupExpr::Sum(
            (0..m)
                .map(|i| GroupExpr::Quasicyclic(nth_prime(i)))
                .chain(std::iter::once(a_n(m)))
                .collect(),
        ),
    }
}

/// `K_n` from `A_n` and the factors `H_i`, `lo <= i < hi`.
fn k_block(n: usize, lo: u64, hi: u64) -> GroupExpr {
    if n == 0 {
        return h_infinity(0);
    }
    GroupExpr::Sum(
        std::iter::once(a_n(n))
            .chain((lo..hi).map(|i| h_infinity(i as usize)))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanCertificate {
    pub n: usize,
    pub source: GroupExpr,
    /// Divisible hull of `L_n`; absent when `L_n` is not torsion (only
    /// possible for `n = 0`, which is settled by universality).
    pub hull: Option<DivNormalForm>,
    pub target: GroupExpr,
    pub certificate: EmbedCertificate,
}

/// Indices run over `0..=horizon` except `n_caps`, which also holds
/// `N_{horizon+1}`. `M_0 = 0` and `N_0 = 0` make the recurrence
/// `N_{n+1} = N_n + M_n + 1` uniform and give `K_0 = H_0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingPlan {
    pub spec: SeqSpec,
    pub horizon: usize,
    pub n_seq: Vec<usize>,
    pub l_seq: Vec<GroupExpr>,
    /// `m_table[n][k] = m(n, k)` for `k < n`.
    pub m_table: Vec<Vec<u64>>,
    pub m_caps: Vec<u64>,
    pub n_caps: Vec<u64>,
    pub k_seq: Vec<GroupExpr>,
    pub certificates: Vec<PlanCertificate>,
    pub notes: Vec<String>,
}

fn n_sequence(spec: &SeqSpec, horizon: usize) -> Result<Vec<usize>, PlanError> {
    let mut out: Vec<usize> = Vec::with_capacity(horizon + 1);
    for k in 0..=horizon {
        let own = spec
            .p_compact_from(nth_prime(k))
            .ok_or(PlanError::NotTame)?;
        out.push(match out.last() {
            None => own,
            Some(&prev) => own.max(prev + 1),
        });
    }
    Ok(out)
}

fn l_sequence(spec: &SeqSpec, n_seq: &[usize]) -> Vec<GroupExpr> {
    (0..n_seq.len())
        .map(|k| {
            let lo = if k == 0 { 0 } else { n_seq[k - 1] };
            match spec.entries(lo..n_seq[k]).as_slice() {
                [] => GroupExpr::Zero,
                [one] => one.clone(),
                many => GroupExpr::Sum(many.to_vec()),
            }
        })
        .collect()
}

fn multiplicity_row(hull: &DivNormalForm, n: usize) -> Result<Vec<u64>, PlanError> {
    (0..n)
        .map(|k| match hull.multiplicity(nth_prime(k)) {
            Multiplicity::Finite(m) => Ok(m),
            // excluded by the choice of n_k
            Multiplicity::FinSup => Err(PlanError::NotTame),
        })
        .collect()
}

pub fn embedding_plan(spec: &SeqSpec, horizon: usize) -> Result<EmbeddingPlan, PlanError> {
    if horizon < 2 {
        return Err(PlanError::HorizonTooSmall(horizon));
    }
    if !classify_product(spec)?.tame {
        return Err(PlanError::NotTame);
    }
    let n_seq = n_sequence(spec, horizon)?;
    let l_seq = l_sequence(spec, &n_seq);

    let mut hulls = Vec::with_capacity(horizon + 1);
    let mut m_table = Vec::with_capacity(horizon + 1);
    for (n, l) in l_seq.iter().enumerate() {
        if n == 0 {
            hulls.push(divisible_hull(l).ok());
            m_table.push(Vec::new());
            continue;
        }
        let hull = divisible_hull(l)?;
        m_table.push(multiplicity_row(&hull, n)?);
        hulls.push(Some(hull));
    }
    let m_caps: Vec<u64> = m_table
        .iter()
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .collect();
    let mut n_caps = vec![0u64];
    for n in 0..=horizon {
        n_caps.push(n_caps[n] + m_caps[n] + 1);
    }
    let k_seq: Vec<GroupExpr> = (0..=horizon)
        .map(|n| k_block(n, n_caps[n], n_caps[n + 1]))
        .collect();

    let mut certificates = Vec::with_capacity(horizon + 1);
    for n in 0..=horizon {
        let certificate = match &hulls[n] {
            Some(h) => embeds(h.clone(), &k_seq[n])?,
            None => embeds(l_seq[n].clone(), &k_seq[n])?,
        };
        certificates.push(PlanCertificate {
            n,
            source: l_seq[n].clone(),
            hull: hulls[n].clone(),
            target: k_seq[n].clone(),
            certificate,
        });
    }

    let notes = periodicity_notes(&l_seq, &m_caps);
    Ok(EmbeddingPlan {
        spec: spec.clone(),
        horizon,
        n_seq,
        l_seq,
        m_table,
        m_caps,
        n_caps,
        k_seq,
        certificates,
        notes,
    })
}

/// Reports the first index from which `L_n` and `M_n` stop changing, when
/// that happens before the horizon.
fn periodicity_notes(l_seq: &[GroupExpr], m_caps: &[u64]) -> Vec<String> {
    let last = l_seq.len() - 1;
    let start = (1..=last)
        .rev()
        .take_while(|&n| l_seq[n] == l_seq[last] && m_caps[n] == m_caps[last])
        .last();
    match start {
        Some(s) if s < last => vec![format!(
            "L_n = {} and M_n = {} for {} <= n <= {}, so N_(n+1) - N_n = {} there",
            l_seq[last],
            m_caps[last],
            s,
            last,
            m_caps[last] + 1
        )],
        _ => vec!["no stabilization of L_n detected below the horizon".into()],
    }
}

/// Recomputes every quantity of the plan from its spec and checks it.
pub fn verify_plan(plan: &EmbeddingPlan) -> bool {
    check_plan(plan).is_some()
}

fn check_plan(plan: &EmbeddingPlan) -> Option<()> {
    let h = plan.horizon;
    let len_ok = plan.n_seq.len() == h + 1
        && plan.l_seq.len() == h + 1
        && plan.m_table.len() == h + 1
        && plan.m_caps.len() == h + 1
        && plan.n_caps.len() == h + 2
        && plan.k_seq.len() == h + 1
        && plan.certificates.len() == h + 1;
    if !len_ok || plan.n_seq.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    if n_sequence(&plan.spec, h).ok()? != plan.n_seq
        || l_sequence(&plan.spec, &plan.n_seq) != plan.l_seq
    {
        return None;
    }
    if plan.n_caps[0] != 0 {
        return None;
    }
    for n in 0..=h {
        let row = &plan.m_table[n];
        if row.len() != n || plan.m_caps[n] != row.iter().copied().max().unwrap_or(0) {
            return None;
        }
        if plan.n_caps[n + 1] != plan.n_caps[n] + plan.m_caps[n] + 1 {
            return None;
        }
        if plan.k_seq[n] != k_block(n, plan.n_caps[n], plan.n_caps[n + 1]) {
            return None;
        }
        let hull = divisible_hull(&plan.l_seq[n]).ok();
        if n > 0 && multiplicity_row(hull.as_ref()?, n).ok()? != *row {
            return None;
        }
        let fresh = match &hull {
            Some(hl) => embeds(hl.clone(), &plan.k_seq[n]).ok()?,
            None => embeds(plan.l_seq[n].clone(), &plan.k_seq[n]).ok()?,
        };
        let cert = &plan.certificates[n];
        let consistent = cert.n == n
            && cert.source == plan.l_seq[n]
            && cert.hull == hull
            && cert.target == plan.k_seq[n]
            && cert.certificate == fresh;
        if !consistent || !fresh.embeds {
            return None;
        }
    }
    Some(())
}
