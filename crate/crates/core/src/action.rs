//! Left action of KL basis elements on W-graph modules.
//!
//! A module is spanned by `b_z` for `z` in a basis set: the whole group (the
//! regular representation) or a left cell (the cell module, where terms
//! leaving the cell are dropped). The action of `b_x` is built from
//! `b_s b_x' = b_x + sum_{z < x', sz < z} mu(z, x') b_z` with `x = s x'`,
//! processing elements in shortlex order.
//!
//! Vectors are dense: each basis element carries coefficients of
//! `v^-a ..= v^a`, where `a` bounds the degrees (the a-value of a cell, or
//! `l(w0)` for the regular module). Coefficients are nonnegative and no
//! cancellation happens inside a generator step, so leaving that window is a
//! hard error.

use crate::coxeter::{CoxeterSystem, ElemId};
use crate::error::{Error, Result};
use crate::hecke::WGraph;
use crate::LaurentPoly;

const ABSENT: u32 = u32::MAX;

/// A W-graph module together with the set of elements acting nonzero.
#[derive(Debug, Clone)]
pub struct ActionModule<'a> {
    sys: &'a CoxeterSystem,
    wg: &'a WGraph,
    basis: Vec<ElemId>,
    pos: Vec<u32>,
    /// Per `(basis index, generator)`: targets of `b_s` when `s` is not a
    /// left descent.
    spread: Vec<Vec<(u32, i64)>>,
    half: usize,
    active: Vec<bool>,
}

/// One vector `b_x b_y` of a pass, restricted to the module basis.
#[derive(Debug, Clone)]
pub struct ModuleVector<'m> {
    basis: &'m [ElemId],
    half: usize,
    data: &'m [i64],
}

impl ModuleVector<'_> {
    fn width(&self) -> usize {
        2 * self.half + 1
    }

    /// Coefficient window of basis position `i`, exponents `-a..=a`.
    pub fn window(&self, i: usize) -> &[i64] {
        let w = self.width();
        &self.data[i * w..(i + 1) * w]
    }

    /// Coefficient of `v^k` at basis position `i`.
    pub fn coeff(&self, i: usize, k: i32) -> i64 {
        let idx = k + self.half as i32;
        if idx < 0 || idx as usize >= self.width() {
            return 0;
        }
        self.window(i)[idx as usize]
    }

    pub fn poly(&self, i: usize) -> LaurentPoly {
        LaurentPoly::from_dense(-(self.half as i32), self.window(i))
    }

    pub fn basis(&self) -> &[ElemId] {
        self.basis
    }

    /// Nonzero `(z, h_z)` in increasing `z`.
    pub fn nonzero_terms(&self) -> Vec<(ElemId, LaurentPoly)> {
        let mut out: Vec<(ElemId, LaurentPoly)> = (0..self.basis.len())
            .filter(|&i| self.window(i).iter().any(|&c| c != 0))
            .map(|i| (self.basis[i], self.poly(i)))
            .collect();
        out.sort_by_key(|t| t.0);
        out
    }

    /// Largest `k` such that some coefficient of `v^-k` is nonzero.
    pub fn max_negative_degree(&self) -> Option<usize> {
        let w = self.width();
        (0..w).find(|&j| (0..self.basis.len()).any(|i| self.data[i * w + j] != 0)).map(|j| self.half - j)
    }
}

impl<'a> ActionModule<'a> {
    /// The regular representation on all of `W`.
    pub fn regular(sys: &'a CoxeterSystem, wg: &'a WGraph) -> Self {
        let basis: Vec<ElemId> = (0..sys.len() as ElemId).collect();
        Self::new(sys, wg, basis, sys.max_length(), vec![true; sys.len()])
    }

    /// The cell module of a left cell with degree bound `a`. `active` marks
    /// the elements whose action can be nonzero (those below the two-sided
    /// cell); all others are treated as acting by zero.
    pub fn cell(
        sys: &'a CoxeterSystem,
        wg: &'a WGraph,
        left_cell: &[ElemId],
        a: usize,
        active: Vec<bool>,
    ) -> Self {
        Self::new(sys, wg, left_cell.to_vec(), a, active)
    }

    fn new(
        sys: &'a CoxeterSystem,
        wg: &'a WGraph,
        mut basis: Vec<ElemId>,
        half: usize,
        active: Vec<bool>,
    ) -> Self {
        basis.sort_unstable();
        let mut pos = vec![ABSENT; sys.len()];
        for (i, &b) in basis.iter().enumerate() {
            pos[b as usize] = i as u32;
        }
        let rank = sys.rank();
        let mut spread = vec![Vec::new(); basis.len() * rank];
        for (i, &w) in basis.iter().enumerate() {
            let ld = wg.left_descents(w);
            for s in 0..rank {
                if ld & (1 << s) != 0 {
                    continue;
                }
                let mut list: Vec<(u32, i64)> = wg
                    .neighbors(w)
                    .filter(|&(z, _)| wg.left_descents(z) & (1 << s) != 0 && pos[z as usize] != ABSENT)
                    .map(|(z, m)| (pos[z as usize], m))
                    .collect();
                list.sort_unstable();
                spread[i * rank + s] = list;
            }
        }
        ActionModule { sys, wg, basis, pos, spread, half, active }
    }

    pub fn basis(&self) -> &[ElemId] {
        &self.basis
    }

    pub fn position(&self, z: ElemId) -> Option<usize> {
        let p = self.pos[z as usize];
        (p != ABSENT).then_some(p as usize)
    }

    pub fn half_width(&self) -> usize {
        self.half
    }

    fn width(&self) -> usize {
        2 * self.half + 1
    }

    /// `dst = b_s src`.
    fn apply_s(&self, s: usize, src: &[i64], dst: &mut [i64]) -> Result<()> {
        let w = self.width();
        let rank = self.sys.rank();
        dst.fill(0);
        for (i, &b) in self.basis.iter().enumerate() {
            let win = &src[i * w..(i + 1) * w];
            if win.iter().all(|&c| c == 0) {
                continue;
            }
            if self.wg.left_descents(b) & (1 << s) != 0 {
                if win[0] != 0 || win[w - 1] != 0 {
                    return Err(Error::PropertyViolation(format!(
                        "degree bound {} exceeded at {}",
                        self.half,
                        self.sys.word_string(b)
                    )));
                }
                let out = &mut dst[i * w..(i + 1) * w];
                for k in 1..w - 1 {
                    let c = win[k];
                    out[k - 1] += c;
                    out[k + 1] += c;
                }
            } else {
                for &(j, m) in &self.spread[i * rank + s] {
                    let out = &mut dst[j as usize * w..(j as usize + 1) * w];
                    for (o, &c) in out.iter_mut().zip(win) {
                        *o += m * c;
                    }
                }
            }
        }
        Ok(())
    }

    /// Computes `b_x b_y` (projected to the module) for every target `x`,
    /// handing each result to `f` in increasing order of `x`. Inactive
    /// targets are reported as zero vectors.
    pub fn pass<F>(&self, y: ElemId, targets: &[ElemId], mut f: F) -> Result<()>
    where
        F: FnMut(ElemId, &ModuleVector<'_>),
    {
        let yp = self.position(y).ok_or_else(|| {
            Error::PropertyViolation(format!("{} is not in the module basis", self.sys.word_string(y)))
        })?;
        let n = self.sys.len();
        let w = self.width();
        let dim = self.basis.len() * w;
        let mut is_target = vec![false; n];
        let mut needed = vec![false; n];
        for &t in targets {
            is_target[t as usize] = true;
            if self.active[t as usize] {
                needed[t as usize] = true;
            }
        }
        needed[0] = true;
        const NEVER: u32 = 0;
        let mut last_use = vec![NEVER; n];
        for x in (1..n).rev() {
            if !needed[x] {
                continue;
            }
            let xi = x as ElemId;
            let s = self.sys.left_descents(xi).trailing_zeros() as usize;
            let xp = self.sys.left_mul(s, xi);
            let mut mark = |u: ElemId| {
                if self.active[u as usize] {
                    needed[u as usize] = true;
                    if last_use[u as usize] == NEVER {
                        last_use[u as usize] = xi;
                    }
                }
            };
            mark(xp);
            for &(z, _) in self.wg.lower(xp) {
                if self.wg.left_descents(z) & (1 << s) != 0 {
                    mark(z);
                }
            }
        }

        let mut store: Vec<Option<Vec<i64>>> = vec![None; n];
        let zero = vec![0i64; dim];
        let mut unit = vec![0i64; dim];
        unit[yp * w + self.half] = 1;
        let emit = |x: ElemId, data: &[i64], f: &mut F| {
            let view = ModuleVector { basis: &self.basis, half: self.half, data };
            f(x, &view);
        };
        if is_target[0] {
            emit(0, &unit, &mut f);
        }
        store[0] = Some(unit);
        for x in 1..n {
            let xi = x as ElemId;
            if !needed[x] {
                if is_target[x] {
                    emit(xi, &zero, &mut f);
                }
                continue;
            }
            let s = self.sys.left_descents(xi).trailing_zeros() as usize;
            let xp = self.sys.left_mul(s, xi);
            let mut out = vec![0i64; dim];
            if let Some(src) = &store[xp as usize] {
                self.apply_s(s, src, &mut out)?;
            }
            for &(z, m) in self.wg.lower(xp) {
                if self.wg.left_descents(z) & (1 << s) == 0 {
                    continue;
                }
                if let Some(src) = &store[z as usize] {
                    for (o, &c) in out.iter_mut().zip(src) {
                        *o -= m * c;
                    }
                }
            }
            if out.iter().any(|&c| c < 0) {
                return Err(Error::PropertyViolation(format!(
                    "negative structure constant in b_{} b_{}",
                    self.sys.word_string(xi),
                    self.sys.word_string(y)
                )));
            }
            if is_target[x] {
                emit(xi, &out, &mut f);
            }
            // Release inputs whose last consumer was x.
            if last_use[xp as usize] == xi {
                store[xp as usize] = None;
            }
            for &(z, _) in self.wg.lower(xp) {
                if last_use[z as usize] == xi {
                    store[z as usize] = None;
                }
            }
            if last_use[x] != NEVER {
                store[x] = Some(out);
            }
        }
        Ok(())
    }
}
