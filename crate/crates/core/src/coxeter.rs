//! Finite Coxeter systems: type descriptors, element tables, normal forms
//! and the Bruhat order.
//!
//! Elements are enumerated breadth-first by length through the action of
//! `W` on its (finite) root system. Ids are dense and follow the shortlex
//! order of normal forms, so id `0` is the identity and the last id is the
//! longest element.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Dense element index inside a [`CoxeterSystem`].
pub type ElemId = u32;

/// Bitmask of generators (bit `i` is generator `i`, zero-based).
pub type GenSet = u16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    H,
    I2,
}

/// A finite Coxeter type such as `A3`, `F4` or `I2(7)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoxeterType {
    family: Family,
    rank: usize,
    /// Bond label for `I2(m)`; unused otherwise.
    m: u32,
}

impl CoxeterType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::H => rank == 3 || rank == 4,
            Family::I2 => false,
        };
        if !ok || rank > 16 {
            return Err(Error::UnsupportedType(format!("{family:?}{rank}")));
        }
        Ok(CoxeterType { family, rank, m: 0 })
    }

    pub fn dihedral(m: u32) -> Result<Self> {
        if m < 3 {
            return Err(Error::UnsupportedType(format!("I2({m})")));
        }
        Ok(CoxeterType { family: Family::I2, rank: 2, m })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The bond label of a dihedral type.
    pub fn dihedral_order(&self) -> Option<u32> {
        (self.family == Family::I2).then_some(self.m)
    }

    /// Coxeter matrix in the standard labelling (zero-based generators).
    pub fn coxeter_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.rank;
        let mut m = vec![vec![2u32; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        let mut bond = |i: usize, j: usize, v: u32| {
            m[i][j] = v;
            m[j][i] = v;
        };
        match self.family {
            Family::A => (0..n - 1).for_each(|i| bond(i, i + 1, 3)),
            Family::B => {
                bond(0, 1, 4);
                (1..n - 1).for_each(|i| bond(i, i + 1, 3));
            }
            Family::D => {
                (0..n - 2).for_each(|i| bond(i, i + 1, 3));
                bond(n - 3, n - 1, 3);
            }
            Family::E => {
                bond(0, 2, 3);
                bond(1, 3, 3);
                (2..n - 1).for_each(|i| bond(i, i + 1, 3));
            }
            Family::F => {
                bond(0, 1, 3);
                bond(1, 2, 4);
                bond(2, 3, 3);
            }
            Family::H => {
                bond(0, 1, 5);
                (1..n - 1).for_each(|i| bond(i, i + 1, 3));
            }
            Family::I2 => bond(0, 1, self.m),
        }
        m
    }

    /// Degrees of the basic invariants of the reflection representation.
    pub fn degrees(&self) -> Vec<u64> {
        let n = self.rank as u64;
        match (self.family, self.rank) {
            (Family::A, _) => (2..=n + 1).collect(),
            (Family::B, _) => (1..=n).map(|i| 2 * i).collect(),
            (Family::D, _) => {
                let mut d: Vec<u64> = (1..n).map(|i| 2 * i).collect();
                d.push(n);
                d.sort_unstable();
                d
            }
            (Family::E, 6) => vec![2, 5, 6, 8, 9, 12],
            (Family::E, 7) => vec![2, 6, 8, 10, 12, 14, 18],
            (Family::E, _) => vec![2, 8, 12, 14, 18, 20, 24, 30],
            (Family::F, _) => vec![2, 6, 8, 12],
            (Family::H, 3) => vec![2, 6, 10],
            (Family::H, _) => vec![2, 12, 20, 30],
            (Family::I2, _) => vec![2, self.m as u64],
        }
    }

    /// Group order, the product of the degrees.
    pub fn group_order(&self) -> u128 {
        self.degrees().iter().map(|&d| d as u128).product()
    }

    /// Length of the longest element, the number of positive roots.
    pub fn num_positive_roots(&self) -> u64 {
        self.degrees().iter().map(|d| d - 1).sum()
    }

    /// The Coxeter number, the largest degree.
    pub fn coxeter_number(&self) -> u64 {
        *self.degrees().iter().max().unwrap()
    }

    /// Crystallographic (Weyl) types.
    pub fn is_weyl(&self) -> bool {
        match self.family {
            Family::A | Family::B | Family::D | Family::E | Family::F => true,
            Family::H => false,
            Family::I2 => matches!(self.m, 3 | 4 | 6),
        }
    }
}

impl fmt::Display for CoxeterType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::I2 => write!(f, "I2({})", self.m),
            fam => write!(f, "{:?}{}", fam, self.rank),
        }
    }
}

impl FromStr for CoxeterType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::UnsupportedType(s.to_string());
        if let Some(rest) = s.strip_prefix("I2(") {
            let m = rest.strip_suffix(')').ok_or_else(bad)?.parse::<u32>().map_err(|_| bad())?;
            return CoxeterType::dihedral(m);
        }
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)? {
            'A' => Family::A,
            'B' => Family::B,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'H' => Family::H,
            _ => return Err(bad()),
        };
        let rank = chars.as_str().parse::<usize>().map_err(|_| bad())?;
        CoxeterType::new(family, rank)
    }
}

/// Read-only view of one element of a [`CoxeterSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub id: ElemId,
    /// Shortlex-minimal reduced word, zero-based generator indices.
    pub normal_form: Vec<u8>,
    pub length: usize,
    pub left_descents: GenSet,
    pub right_descents: GenSet,
    pub inverse: ElemId,
}

/// A finite Coxeter group with its full element table.
#[derive(Debug, Clone)]
pub struct CoxeterSystem {
    ty: CoxeterType,
    matrix: Vec<Vec<u32>>,
    rank: usize,
    /// `left[w * rank + s]` is the id of `s w`.
    left: Vec<ElemId>,
    /// `right[w * rank + s]` is the id of `w s`.
    right: Vec<ElemId>,
    length: Vec<u16>,
    ldesc: Vec<GenSet>,
    rdesc: Vec<GenSet>,
    inverse: Vec<ElemId>,
    /// First id of each length, plus a final sentinel.
    length_offsets: Vec<usize>,
}

struct RootSystem {
    coords: Vec<Vec<f64>>,
    positive: Vec<bool>,
    /// `action[s][r]` is the index of `s(root r)`.
    action: Vec<Vec<u16>>,
}

impl RootSystem {
    fn build(matrix: &[Vec<u32>]) -> Result<Self> {
        let n = matrix.len();
        let form: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| -(std::f64::consts::PI / matrix[i][j] as f64).cos())
                    .collect()
            })
            .collect();
        let reflect = |s: usize, beta: &[f64]| -> Vec<f64> {
            let b: f64 = (0..n).map(|t| beta[t] * form[s][t]).sum();
            let mut out = beta.to_vec();
            out[s] -= 2.0 * b;
            out
        };
        let find = |roots: &[Vec<f64>], v: &[f64]| -> Option<usize> {
            roots.iter().position(|r| r.iter().zip(v).all(|(a, b)| (a - b).abs() < 1e-7))
        };
        let mut coords: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let mut frontier: Vec<usize> = (0..n).collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &r in &frontier {
                for s in 0..n {
                    let img = reflect(s, &coords[r]);
                    if find(&coords, &img).is_none() {
                        coords.push(img);
                        next.push(coords.len() - 1);
                    }
                }
            }
            frontier = next;
            if coords.len() > u16::MAX as usize {
                return Err(Error::UnsupportedType("root system is not finite".into()));
            }
        }
        let mut action = vec![vec![0u16; coords.len()]; n];
        for (s, row) in action.iter_mut().enumerate() {
            for (r, slot) in row.iter_mut().enumerate() {
                let img = reflect(s, &coords[r]);
                *slot = find(&coords, &img).expect("root orbit is closed") as u16;
            }
        }
        let positive = coords.iter().map(|c| c.iter().all(|&x| x > -1e-7)).collect();
        Ok(RootSystem { coords, positive, action })
    }
}

impl CoxeterSystem {
    /// Builds the element table with the default budget.
    pub fn build(ty: CoxeterType) -> Result<Self> {
        Self::build_with_budget(ty, &Budget::unlimited())
    }

    pub fn build_with_budget(ty: CoxeterType, budget: &Budget) -> Result<Self> {
        let order = ty.group_order();
        budget.check_elements(&format!("{ty}"), order)?;
        if order > u32::MAX as u128 / 16 {
            return Err(Error::BudgetExceeded(format!("{ty} has {order} elements")));
        }
        let matrix = ty.coxeter_matrix();
        let rank = ty.rank();
        let roots = RootSystem::build(&matrix)?;
        debug_assert_eq!(
            roots.positive.iter().filter(|&&p| p).count() as u64,
            ty.num_positive_roots()
        );
        let _ = &roots.coords;

        let order = order as usize;
        let pack = |imgs: &[u16]| -> u128 {
            imgs.iter().enumerate().fold(0u128, |acc, (i, &r)| acc | ((r as u128) << (16 * i)))
        };
        let mut images: Vec<Vec<u16>> = Vec::with_capacity(order);
        images.push((0..rank as u16).collect());
        let mut index: HashMap<u128, ElemId> = HashMap::with_capacity(order);
        index.insert(pack(&images[0]), 0);
        let mut left = vec![ElemId::MAX; order * rank];
        let mut length: Vec<u16> = vec![0];
        let mut length_offsets = vec![0usize, 1];

        loop {
            let lo = length_offsets[length_offsets.len() - 2];
            let hi = length_offsets[length_offsets.len() - 1];
            let cur_len = length[lo];
            for s in 0..rank {
                for w in lo..hi {
                    if left[w * rank + s] != ElemId::MAX {
                        continue;
                    }
                    let img: Vec<u16> =
                        images[w].iter().map(|&r| roots.action[s][r as usize]).collect();
                    let key = pack(&img);
                    let id = match index.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = images.len() as ElemId;
                            if images.len() >= order {
                                return Err(Error::PropertyViolation(format!(
                                    "{ty}: enumeration exceeded the group order {order}"
                                )));
                            }
                            index.insert(key, id);
                            images.push(img);
                            length.push(cur_len + 1);
                            id
                        }
                    };
                    left[w * rank + s] = id;
                    left[id as usize * rank + s] = w as ElemId;
                }
            }
            if images.len() == hi {
                break;
            }
            length_offsets.push(images.len());
        }
        drop(index);
        if images.len() != order {
            return Err(Error::PropertyViolation(format!(
                "{ty}: enumerated {} elements, expected {order}",
                images.len()
            )));
        }

        let n = order;
        let mut ldesc = vec![0 as GenSet; n];
        let mut rdesc = vec![0 as GenSet; n];
        for w in 0..n {
            for s in 0..rank {
                if length[left[w * rank + s] as usize] < length[w] {
                    ldesc[w] |= 1 << s;
                }
                if !roots.positive[images[w][s] as usize] {
                    rdesc[w] |= 1 << s;
                }
            }
        }
        drop(images);

        let mut sys = CoxeterSystem {
            ty,
            matrix,
            rank,
            left,
            right: Vec::new(),
            length,
            ldesc,
            rdesc,
            inverse: Vec::new(),
            length_offsets,
        };
        let inverse: Vec<ElemId> = (0..n as ElemId)
            .map(|w| {
                let mut u: ElemId = 0;
                for s in sys.normal_form_iter(w) {
                    u = sys.left_mul(s, u);
                }
                u
            })
            .collect();
        let mut right = vec![0 as ElemId; n * rank];
        for w in 0..n {
            for s in 0..rank {
                let wi = inverse[w] as usize;
                right[w * rank + s] = inverse[sys.left[wi * rank + s] as usize];
            }
        }
        sys.inverse = inverse;
        sys.right = right;
        Ok(sys)
    }

    pub fn coxeter_type(&self) -> CoxeterType {
        self.ty
    }

    pub fn coxeter_matrix(&self) -> &[Vec<u32>] {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.length.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn identity(&self) -> ElemId {
        0
    }

    pub fn longest(&self) -> ElemId {
        (self.len() - 1) as ElemId
    }

    pub fn generator(&self, s: usize) -> ElemId {
        self.left[s]
    }

    #[inline]
    pub fn length(&self, w: ElemId) -> usize {
        self.length[w as usize] as usize
    }

    pub fn max_length(&self) -> usize {
        self.length(self.longest())
    }

    /// Ids of all elements of length `k`.
    pub fn elements_of_length(&self, k: usize) -> std::ops::Range<ElemId> {
        if k + 1 >= self.length_offsets.len() {
            return 0..0;
        }
        self.length_offsets[k] as ElemId..self.length_offsets[k + 1] as ElemId
    }

    #[inline]
    pub fn left_mul(&self, s: usize, w: ElemId) -> ElemId {
        self.left[w as usize * self.rank + s]
    }

    #[inline]
    pub fn right_mul(&self, w: ElemId, s: usize) -> ElemId {
        self.right[w as usize * self.rank + s]
    }

    #[inline]
    pub fn left_descents(&self, w: ElemId) -> GenSet {
        self.ldesc[w as usize]
    }

    #[inline]
    pub fn right_descents(&self, w: ElemId) -> GenSet {
        self.rdesc[w as usize]
    }

    #[inline]
    pub fn inverse(&self, w: ElemId) -> ElemId {
        self.inverse[w as usize]
    }

    /// Letters of the shortlex normal form, left to right.
    pub fn normal_form_iter(&self, w: ElemId) -> impl Iterator<Item = usize> + '_ {
        let mut cur = w;
        std::iter::from_fn(move || {
            let d = self.ldesc[cur as usize];
            if d == 0 {
                return None;
            }
            let s = d.trailing_zeros() as usize;
            cur = self.left_mul(s, cur);
            Some(s)
        })
    }

    pub fn normal_form(&self, w: ElemId) -> Vec<u8> {
        self.normal_form_iter(w).map(|s| s as u8).collect()
    }

    /// Normal form written with one-based generator labels, e.g. `12321`.
    pub fn word_string(&self, w: ElemId) -> String {
        if w == 0 {
            return "e".to_string();
        }
        let sep = if self.rank >= 10 { "," } else { "" };
        self.normal_form_iter(w).map(|s| (s + 1).to_string()).collect::<Vec<_>>().join(sep)
    }

    /// Element represented by a word of zero-based generators.
    pub fn from_word(&self, word: &[usize]) -> Result<ElemId> {
        let mut w = 0;
        for &s in word {
            if s >= self.rank {
                return Err(Error::UnsupportedType(format!("generator {} out of range", s + 1)));
            }
            w = self.right_mul(w, s);
        }
        Ok(w)
    }

    /// Parses `e` or a string of one-based generator labels such as `12321`.
    pub fn parse_word(&self, text: &str) -> Result<ElemId> {
        let text = text.trim();
        if text == "e" || text.is_empty() {
            return Ok(0);
        }
        let letters: Vec<usize> = if text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::UnsupportedType(format!("bad word {text}")))?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::UnsupportedType(format!("bad word {text}")))?
        };
        let word: Vec<usize> = letters
            .into_iter()
            .map(|l| l.checked_sub(1).ok_or_else(|| Error::UnsupportedType("generator 0".into())))
            .collect::<Result<_>>()?;
        self.from_word(&word)
    }

    pub fn element(&self, w: ElemId) -> Element {
        Element {
            id: w,
            normal_form: self.normal_form(w),
            length: self.length(w),
            left_descents: self.left_descents(w),
            right_descents: self.right_descents(w),
            inverse: self.inverse(w),
        }
    }

    /// The product `xy`.
    pub fn product(&self, x: ElemId, y: ElemId) -> ElemId {
        self.normal_form_iter(y).fold(x, |acc, s| self.right_mul(acc, s))
    }

    /// Bruhat order test via the lifting property; `O(l(y))`.
    pub fn bruhat_leq(&self, x: ElemId, y: ElemId) -> bool {
        let (mut x, mut y) = (x, y);
        loop {
            if self.length(x) > self.length(y) {
                return false;
            }
            if self.length(x) == self.length(y) {
                return x == y;
            }
            if x == 0 {
                return true;
            }
            let s = self.ldesc[y as usize].trailing_zeros() as usize;
            if self.ldesc[x as usize] & (1 << s) != 0 {
                x = self.left_mul(s, x);
            }
            y = self.left_mul(s, y);
        }
    }

    /// Number of elements of each length.
    pub fn length_profile(&self) -> Vec<usize> {
        self.length_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn is_involution(&self, w: ElemId) -> bool {
        self.inverse(w) == w
    }
}

/// Bruhat intervals `[e, w]` for every `w`, stored as bitsets.
#[derive(Debug, Clone)]
pub struct BruhatTable {
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BruhatTable {
    pub fn build(sys: &CoxeterSystem) -> Self {
        let n = sys.len();
        let wpr = n.div_ceil(64);
        let mut bits = vec![0u64; n * wpr];
        bits[0] = 1;
        for w in 1..n {
            let s = sys.left_descents(w as ElemId).trailing_zeros() as usize;
            let sw = sys.left_mul(s, w as ElemId) as usize;
            let (head, tail) = bits.split_at_mut(w * wpr);
            let src = &head[sw * wpr..(sw + 1) * wpr];
            let dst = &mut tail[..wpr];
            dst.copy_from_slice(src);
            for (k, &word) in src.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let b = word.trailing_zeros() as usize;
                    word &= word - 1;
                    let x = sys.left_mul(s, (k * 64 + b) as ElemId) as usize;
                    dst[x / 64] |= 1 << (x % 64);
                }
            }
        }
        BruhatTable { words_per_row: wpr, bits }
    }

    #[inline]
    pub fn leq(&self, x: ElemId, y: ElemId) -> bool {
        let x = x as usize;
        self.bits[y as usize * self.words_per_row + x / 64] & (1 << (x % 64)) != 0
    }

    /// Elements of `[e, y]` in increasing id order.
    pub fn interval(&self, y: ElemId) -> impl Iterator<Item = ElemId> + '_ {
        let row = &self.bits[y as usize * self.words_per_row..(y as usize + 1) * self.words_per_row];
        row.iter().enumerate().flat_map(|(k, &word)| {
            let mut word = word;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros();
                word &= word - 1;
                Some((k * 64) as ElemId + b)
            })
        })
    }

    pub fn interval_size(&self, y: ElemId) -> usize {
        let row = &self.bits[y as usize * self.words_per_row..(y as usize + 1) * self.words_per_row];
        row.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(s: &str) -> CoxeterSystem {
        CoxeterSystem::build(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn type_strings_round_trip() {
        for s in ["A3", "B6", "D4", "E6", "F4", "H3", "H4", "I2(7)"] {
            let t: CoxeterType = s.parse().unwrap();
            assert_eq!(t.to_string(), s);
        }
    }

    #[test]
    fn rejects_infinite_and_out_of_range_types() {
        for s in ["A0", "B1", "D3", "E9", "F5", "H5", "I2(2)", "I2(1)", "X3", "I2(x)", ""] {
            assert!(matches!(s.parse::<CoxeterType>(), Err(Error::UnsupportedType(_))), "{s}");
        }
    }

    #[test]
    fn a1_has_two_elements() {
        let w = sys("A1");
        assert_eq!(w.len(), 2);
        assert_eq!(w.longest(), w.generator(0));
        assert_eq!(w.normal_form(0), Vec::<u8>::new());
    }

    #[test]
    fn a3_longest_element() {
        let w = sys("A3");
        assert_eq!(w.len(), 24);
        assert_eq!(w.max_length(), 6);
        assert_eq!(w.parse_word("121321").unwrap(), w.longest());
        assert_eq!(w.word_string(w.longest()), "121321");
    }

    #[test]
    fn h3_longest_length() {
        let w = sys("H3");
        assert_eq!(w.len(), 120);
        assert_eq!(w.max_length(), 15);
    }

    #[test]
    fn group_orders_match_degrees() {
        for s in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "D4", "D5", "F4", "H3", "I2(5)", "I2(12)", "E6"] {
            let w = sys(s);
            assert_eq!(w.len() as u128, w.coxeter_type().group_order(), "{s}");
            assert_eq!(w.max_length() as u64, w.coxeter_type().num_positive_roots(), "{s}");
        }
    }

    #[test]
    fn products_and_involutions() {
        let w = sys("A3");
        let d = w.parse_word("12321").unwrap();
        assert_eq!(w.product(d, d), 0);
        for s in 0..3 {
            let g = w.generator(s);
            assert_eq!(w.product(g, g), 0);
        }
        for x in 0..24 {
            assert_eq!(w.product(0, x), x);
            assert_eq!(w.product(x, w.inverse(x)), 0);
        }
    }

    #[test]
    fn bruhat_examples_in_a2() {
        let w = sys("A2");
        let s1 = w.parse_word("1").unwrap();
        let s12 = w.parse_word("12").unwrap();
        let s21 = w.parse_word("21").unwrap();
        assert!(w.bruhat_leq(s1, s12));
        assert!(!w.bruhat_leq(s12, s21));
        for x in 0..w.len() as ElemId {
            assert!(w.bruhat_leq(0, x));
            assert_eq!(w.bruhat_leq(w.longest(), x), x == w.longest());
        }
    }

    #[test]
    fn normal_forms_are_shortlex_minimal_and_ids_shortlex_sorted() {
        let w = sys("B3");
        let words: Vec<Vec<u8>> = (0..w.len() as ElemId).map(|x| w.normal_form(x)).collect();
        for pair in words.windows(2) {
            assert!((pair[0].len(), &pair[0]) < (pair[1].len(), &pair[1]));
        }
        for (x, nf) in words.iter().enumerate() {
            assert_eq!(nf.len(), w.length(x as ElemId));
            let word: Vec<usize> = nf.iter().map(|&s| s as usize).collect();
            assert_eq!(w.from_word(&word).unwrap(), x as ElemId);
        }
    }

    /// Subword criterion: `x <= w` iff `x` is the product of a subword of a
    /// reduced word of `w`.
    fn subword_oracle(w: &CoxeterSystem, y: ElemId) -> Vec<bool> {
        let word = w.normal_form(y);
        let mut below = vec![false; w.len()];
        for mask in 0u32..(1 << word.len()) {
            let sub: Vec<usize> =
                (0..word.len()).filter(|i| mask & (1 << i) != 0).map(|i| word[i] as usize).collect();
            below[w.from_word(&sub).unwrap() as usize] = true;
        }
        below
    }

    #[test]
    fn bruhat_matches_subword_criterion() {
        for t in ["A3", "B3", "I2(5)", "H3"] {
            let w = sys(t);
            let table = BruhatTable::build(&w);
            let step = if w.len() > 50 { 7 } else { 1 };
            for y in (0..w.len() as ElemId).step_by(step) {
                if w.length(y) > 12 {
                    continue;
                }
                let oracle = subword_oracle(&w, y);
                for x in 0..w.len() as ElemId {
                    assert_eq!(w.bruhat_leq(x, y), oracle[x as usize], "{t} {x} {y}");
                    assert_eq!(table.leq(x, y), oracle[x as usize], "{t} {x} {y}");
                }
                assert_eq!(table.interval_size(y), oracle.iter().filter(|&&b| b).count());
            }
        }
    }

    #[test]
    fn descents_agree_with_lengths() {
        let w = sys("D4");
        for x in 0..w.len() as ElemId {
            for s in 0..4 {
                let l = w.length(w.left_mul(s, x)) < w.length(x);
                let r = w.length(w.right_mul(x, s)) < w.length(x);
                assert_eq!(w.left_descents(x) & (1 << s) != 0, l);
                assert_eq!(w.right_descents(x) & (1 << s) != 0, r);
                assert_eq!(w.left_descents(w.inverse(x)), w.right_descents(x));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn multiplication_is_associative(a in 0u32..384, b in 0u32..384, c in 0u32..384) {
            let w = sys("B4");
            let ab_c = w.product(w.product(a, b), c);
            let a_bc = w.product(a, w.product(b, c));
            proptest::prop_assert_eq!(ab_c, a_bc);
            proptest::prop_assert_eq!(w.inverse(w.product(a, b)), w.product(w.inverse(b), w.inverse(a)));
        }
    }

    #[test]
    fn unsupported_by_budget() {
        let t: CoxeterType = "E8".parse().unwrap();
        let err = CoxeterSystem::build_with_budget(t, &Budget::default()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded(_)));
    }
}
