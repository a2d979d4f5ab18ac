//! Batch evaluation of S(ε, γ, δ) over all ε at once.
//!
//! For fixed (γ, δ) write Q(x) = Tr(γx^{p^k+1} + δx^{p^{3k}+1}) ∈ F_p. The
//! naive path costs p^n field passes per ε; this module computes every
//!
//!   W_t(ε) = Σ_x ζ^{t·(Q(x) + Tr(εx))},   t = 1, …, p − 1,
//!
//! simultaneously as an n-dimensional discrete Fourier transform over F_p^n.
//! Identifying x with its coefficient vector, Tr(εx) = ⟨u(ε), x⟩ where
//! u(ε) = G·e(ε) and G is the Gram matrix G_ij = Tr(α^i α^j) of the trace
//! pairing (nondegenerate, so ε ↦ u(ε) is a bijection). Hence
//! W_t(ε) = ĝ_t(t·u(ε)) for g_t(x) = ζ^{t·Q(x)}, and one transform of g_t
//! serves every ε.
//!
//! All arithmetic is exact: a grid cell is a length-p u32 count vector
//! representing an element of Z[ζ_p], a DFT butterfly is a cyclic rotation
//! plus add, and the final inversion
//!
//!   p·N_ε(ρ) = p^n·[t = 0 term] + Σ_{t≠0} rot(W_t(ε), −tρ)
//!
//! must reduce to a rational integer divisible by p — both checked, since a
//! failure there is an implementation bug, not a data condition.

use super::cyclotomic::CyclotomicCounts;
use super::SumError;
use crate::field::{CodeParams, FieldCtx, FieldElement};
use crate::limits::Limits;

/// Shared, immutable precomputation for one (params, ctx): power maps for
/// Q(x), the per-t cell permutations ε ↦ t·G·e(ε), and the p×p product table.
pub struct TransformPlan<'a> {
    params: &'a CodeParams,
    ctx: &'a FieldCtx,
    pow1: Vec<u32>,
    pow3: Vec<u32>,
    /// perm[t−1][ε index] = packed grid index of t·u(ε).
    perm: Vec<Vec<u32>>,
    /// rot[w][x] = w·x mod p.
    rot: Vec<Vec<u8>>,
}

impl<'a> TransformPlan<'a> {
    pub fn new(
        params: &'a CodeParams,
        ctx: &'a FieldCtx,
        limits: &Limits,
    ) -> Result<Self, SumError> {
        let (p, q) = (params.p, params.q());
        // Two working grids, p − 1 transformed grids (u32 cells), one output
        // table (u64 counts): all q cells of p entries each.
        let required = q * p * 4 * (2 + (p - 1)) + q * p * 8;
        if required > limits.max_grid_bytes {
            return Err(SumError::MemoryCapExceeded { required, cap: limits.max_grid_bytes });
        }

        let q1 = ctx.units_order();
        let e1 = (params.p_pow(params.k % params.n) + 1) % q1;
        let e3 = (params.p_pow(3 * params.k % params.n) + 1) % q1;
        let map = |e: u64| (0..q1).map(|j| (j * e % q1) as u32).collect();

        let n = params.n as usize;
        // Gram matrix of the trace pairing in the coefficient basis.
        let mut gram = vec![vec![0u64; n]; n];
        for i in 0..n {
            let bi = ctx.from_index(params.p.pow(i as u32));
            for j in 0..=i {
                let bj = ctx.from_index(params.p.pow(j as u32));
                let t = ctx.trace_to_prime(ctx.mul(bi, bj));
                gram[i][j] = t;
                gram[j][i] = t;
            }
        }
        let mut perm = vec![vec![0u32; q as usize]; (p - 1) as usize];
        let mut digits = vec![0u64; n];
        for eps in 0..q {
            let mut rest = eps;
            for dig in digits.iter_mut() {
                *dig = rest % p;
                rest /= p;
            }
            for (t_idx, row) in perm.iter_mut().enumerate() {
                let t = t_idx as u64 + 1;
                let mut packed = 0u64;
                for i in (0..n).rev() {
                    let u_i: u64 = (0..n).map(|j| gram[i][j] * digits[j]).sum::<u64>() % p;
                    packed = packed * p + t * u_i % p;
                }
                row[eps as usize] = packed as u32;
            }
        }
        let rot = (0..p)
            .map(|w| (0..p).map(|x| (w * x % p) as u8).collect())
            .collect();
        Ok(TransformPlan { params, ctx, pow1: map(e1), pow3: map(e3), perm, rot })
    }

    /// Allocate the scratch buffers one worker needs.
    pub fn workspace(&self) -> TransformWorkspace {
        let q = self.params.q() as usize;
        let p = self.params.p as usize;
        TransformWorkspace {
            qvec: vec![0; q],
            grid: vec![0; q * p],
            scratch: vec![0; q * p],
            wgrids: vec![vec![0; q * p]; p - 1],
            v: vec![0; p],
            out: vec![0; q * p],
        }
    }

    /// Compute N_ε(ρ) for every ε into `ws.out[ε·p + ρ]`.
    pub fn run(
        &self,
        ws: &mut TransformWorkspace,
        gamma: FieldElement,
        delta: FieldElement,
    ) -> Result<(), SumError> {
        let p = self.params.p as usize;
        let q = self.params.q() as usize;
        let q1 = self.ctx.units_order();

        // Q(x) per packed cell; cell 0 is x = 0 with Q = 0.
        ws.qvec.fill(0);
        let lg = self.ctx.log(gamma);
        let ld = self.ctx.log(delta);
        for j in 0..q1 as usize {
            let mut rho = 0u32;
            if let Some(lg) = lg {
                let mut t = lg + self.pow1[j] as u64;
                if t >= q1 {
                    t -= q1;
                }
                rho += self.ctx.tr1_of_index(self.ctx.exp_raw(t as usize) as usize);
            }
            if let Some(ld) = ld {
                let mut t = ld + self.pow3[j] as u64;
                if t >= q1 {
                    t -= q1;
                }
                rho += self.ctx.tr1_of_index(self.ctx.exp_raw(t as usize) as usize);
            }
            ws.qvec[self.ctx.exp_raw(j) as usize] = (rho % p as u32) as u8;
        }

        for t in 1..p {
            // Spike grid for g_t(x) = ζ^{t·Q(x)}.
            ws.grid.fill(0);
            for cell in 0..q {
                ws.grid[cell * p + self.rot[t][ws.qvec[cell] as usize] as usize] = 1;
            }
            // One size-p DFT pass per coordinate axis.
            let mut stride = 1usize;
            for _axis in 0..self.params.n {
                ws.scratch.fill(0);
                let block = stride * p;
                for base in (0..q).step_by(block) {
                    for offset in 0..stride {
                        let fiber = base + offset;
                        for w in 0..p {
                            let out_cell = (fiber + w * stride) * p;
                            for x in 0..p {
                                let in_cell = (fiber + x * stride) * p;
                                let off = self.rot[w][x] as usize;
                                for c in 0..p {
                                    let shifted = if c + off >= p { c + off - p } else { c + off };
                                    ws.scratch[out_cell + shifted] += ws.grid[in_cell + c];
                                }
                            }
                        }
                    }
                }
                std::mem::swap(&mut ws.grid, &mut ws.scratch);
                stride *= p;
            }
            ws.wgrids[t - 1].copy_from_slice(&ws.grid);
        }

        // Invert: p·N_ε(ρ) = p^n + Σ_t rot(W_t(ε), −tρ), cell-exact.
        for eps in 0..q {
            for rho in 0..p {
                ws.v.fill(0);
                ws.v[0] = q as i64;
                for t in 1..p {
                    let cell = self.perm[t - 1][eps] as usize * p;
                    let shift = self.rot[t][rho] as usize;
                    for c in 0..p {
                        let src = if c + shift >= p { c + shift - p } else { c + shift };
                        ws.v[c] += ws.wgrids[t - 1][cell + src] as i64;
                    }
                }
                if ws.v[2..].iter().any(|&x| x != ws.v[1]) {
                    return Err(SumError::NonIntegralCount {
                        detail: format!(
                            "non-rational inversion vector {:?} at ε index {eps}, ρ = {rho}",
                            ws.v
                        ),
                    });
                }
                let value = ws.v[0] - ws.v[1];
                if value < 0 || value % p as i64 != 0 {
                    return Err(SumError::NonIntegralCount {
                        detail: format!(
                            "p·N = {value} not a nonnegative multiple of p at ε index {eps}, ρ = {rho}"
                        ),
                    });
                }
                ws.out[eps * p + rho] = (value / p as i64) as u64;
            }
            debug_assert_eq!(
                ws.out[eps * p..(eps + 1) * p].iter().sum::<u64>(),
                q as u64,
                "counts for one ε must cover the whole field"
            );
        }
        Ok(())
    }
}

/// Per-worker scratch space for [`TransformPlan::run`]; `out` holds the
/// flattened result, `out[ε·p + ρ] = N_ε(ρ)`.
pub struct TransformWorkspace {
    qvec: Vec<u8>,
    grid: Vec<u32>,
    scratch: Vec<u32>,
    wgrids: Vec<Vec<u32>>,
    v: Vec<i64>,
    pub out: Vec<u64>,
}

impl TransformWorkspace {
    /// The count vector computed for one ε, by packed element index.
    pub fn counts_of(&self, eps_index: usize, p: usize) -> &[u64] {
        &self.out[eps_index * p..(eps_index + 1) * p]
    }
}

/// All q count vectors for fixed (γ, δ), indexed by ε's packed element index.
pub fn batch_counts_over_epsilon(
    params: &CodeParams,
    ctx: &FieldCtx,
    gamma: FieldElement,
    delta: FieldElement,
    limits: &Limits,
) -> Result<Vec<CyclotomicCounts>, SumError> {
    let plan = TransformPlan::new(params, ctx, limits)?;
    let mut ws = plan.workspace();
    plan.run(&mut ws, gamma, delta)?;
    let p = params.p as usize;
    Ok((0..params.q() as usize)
        .map(|e| CyclotomicCounts::new(ws.counts_of(e, p).to_vec()))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, validate_params};
    use crate::sums::Evaluator;

    #[test]
    fn batch_agrees_with_the_direct_evaluator_everywhere() {
        let params = validate_params(3, 3, 1).unwrap();
        let ctx = make_field(3, 3, None).unwrap();
        let evaluator = Evaluator::new(&params, &ctx);
        let plan = TransformPlan::new(&params, &ctx, &Limits::default()).unwrap();
        let mut ws = plan.workspace();
        for gamma in ctx.elements() {
            for delta in ctx.elements() {
                plan.run(&mut ws, gamma, delta).unwrap();
                for eps in ctx.elements() {
                    let direct = evaluator.counts(eps, gamma, delta);
                    assert_eq!(
                        ws.counts_of(eps.index(), 3),
                        direct.counts(),
                        "divergence at ε={eps:?}, γ={gamma:?}, δ={delta:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_form_gives_linear_character_sums() {
        let params = validate_params(3, 3, 1).unwrap();
        let ctx = make_field(3, 3, None).unwrap();
        let zero = ctx.zero();
        let tables =
            batch_counts_over_epsilon(&params, &ctx, zero, zero, &Limits::default()).unwrap();
        assert_eq!(tables[0].counts(), &[27, 0, 0]);
        for eps in 1..27 {
            assert_eq!(tables[eps].counts(), &[9, 9, 9]);
        }
    }

    #[test]
    fn memory_cap_guard_fires() {
        let params = validate_params(3, 3, 1).unwrap();
        let ctx = make_field(3, 3, None).unwrap();
        let tiny = Limits { max_grid_bytes: 64, ..Limits::default() };
        assert!(matches!(
            TransformPlan::new(&params, &ctx, &tiny),
            Err(SumError::MemoryCapExceeded { .. })
        ));
    }
}
