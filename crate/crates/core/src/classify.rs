//! Identification of the asymptotic category of each two-sided cell and
//! enumeration of simple transitive 2-representations.

use std::fmt;

use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;
use serde::Serialize;

use crate::asymptotic::FusionRing;
use crate::budget::Budget;
use crate::cells::CellAnalysis;
use crate::coxeter::{CoxeterType, Family};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum CategoryKind {
    /// `Vect((Z/2)^k)`.
    VectElemAbelian(u32),
    RepS3,
    RepS4,
    RepS5,
    /// `SO(3)_k`.
    SO3(u32),
    /// `Vect(Z/2)` twisted by the nontrivial 3-cocycle.
    VectZ2Twisted,
    /// Strongly regular cell: every H-cell is a singleton.
    Strict1x1,
    /// The Grothendieck ring is known but the category is not; lists the
    /// candidates (empty when none are known).
    AmbiguousH(Vec<String>),
}

impl fmt::Display for CategoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryKind::VectElemAbelian(0) => write!(f, "Vect"),
            CategoryKind::VectElemAbelian(k) => write!(f, "Vect((Z/2)^{k})"),
            CategoryKind::RepS3 => write!(f, "Rep(S3)"),
            CategoryKind::RepS4 => write!(f, "Rep(S4)"),
            CategoryKind::RepS5 => write!(f, "Rep(S5)"),
            CategoryKind::SO3(k) => write!(f, "SO(3)_{k}"),
            CategoryKind::VectZ2Twisted => write!(f, "Vect^s(Z/2)"),
            CategoryKind::Strict1x1 => write!(f, "strongly regular"),
            CategoryKind::AmbiguousH(c) if c.is_empty() => write!(f, "open: unknown"),
            CategoryKind::AmbiguousH(c) => write!(f, "open: {}", c.join(" or ")),
        }
    }
}

/// What an identified diagonal H-cell ring looked like.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingFingerprint {
    pub left_cell: usize,
    pub rank: usize,
    pub commutative: bool,
    /// Sorted Frobenius-Perron dimensions.
    pub pf_dims: Vec<f64>,
    pub total_dim: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    /// Block form of the cell matrix, e.g. `5_{3,3} 3_{3,3}; ...`.
    pub cell_matrix: String,
    /// Sizes of the diagonal H-cells, one per left cell.
    pub h_cell_sizes: Vec<usize>,
    pub rings: Vec<RingFingerprint>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryTag {
    pub kind: CategoryKind,
    pub evidence: Evidence,
}

/// Groups whose module categories are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GroupKind {
    ElemAbelian(u32),
    S3,
    S4,
    S5,
}

/// One conjugacy class type of subgroups `K`, with the ranks of the
/// 2-representations attached to each element of `H^2(K, C*)`, trivial
/// class first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupClass {
    pub name: String,
    pub order: usize,
    /// Number of conjugacy classes of such subgroups.
    pub count: u64,
    pub schur_multiplier: String,
    pub ranks: Vec<usize>,
}

fn sc(name: &str, order: usize, count: u64, schur: &str, ranks: &[usize]) -> SubgroupClass {
    SubgroupClass { name: name.into(), order, count, schur_multiplier: schur.into(), ranks: ranks.to_vec() }
}

/// Number of `l`-dimensional subspaces of `F_2^k`.
pub fn gaussian_binomial_2(k: u32, l: u32) -> u64 {
    if l > k {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..l {
        num *= (1u128 << (k - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    (num / den) as u64
}

/// Subgroup data for the groups whose module categories are enumerated.
pub fn group_data(g: GroupKind) -> Vec<SubgroupClass> {
    const Z2: &str = "Z/2";
    match g {
        GroupKind::ElemAbelian(k) => (0..=k)
            .map(|l| {
                let h2 = l * l.saturating_sub(1) / 2;
                let name = match l {
                    0 => "1".to_string(),
                    1 => "Z/2".to_string(),
                    _ => format!("(Z/2)^{l}"),
                };
                let schur = match h2 {
                    0 => "1".to_string(),
                    1 => Z2.to_string(),
                    _ => format!("(Z/2)^{h2}"),
                };
                SubgroupClass {
                    name,
                    order: 1 << l,
                    count: gaussian_binomial_2(k, l),
                    schur_multiplier: schur,
                    ranks: vec![1 << (k - l); 1 << h2],
                }
            })
            .collect(),
        GroupKind::S3 => vec![sc("1", 1, 1, "1", &[1]), sc("Z/2", 2, 1, "1", &[2]), sc("Z/3", 3, 1, "1", &[3]), sc("S3", 6, 1, "1", &[3])],
        GroupKind::S4 => vec![
            sc("1", 1, 1, "1", &[1]),
            sc("Z/2", 2, 2, "1", &[2]),
            sc("Z/3", 3, 1, "1", &[3]),
            sc("Z/4", 4, 1, "1", &[4]),
            sc("(Z/2)^2", 4, 2, Z2, &[4, 1]),
            sc("S3", 6, 1, "1", &[3]),
            sc("D4", 8, 1, Z2, &[5, 2]),
            sc("A4", 12, 1, Z2, &[4, 3]),
            sc("S4", 24, 1, Z2, &[5, 3]),
        ],
        GroupKind::S5 => vec![
            sc("1", 1, 1, "1", &[1]),
            sc("Z/2", 2, 2, "1", &[2]),
            sc("Z/3", 3, 1, "1", &[3]),
            sc("Z/4", 4, 1, "1", &[4]),
            sc("(Z/2)^2", 4, 2, Z2, &[4, 1]),
            sc("Z/5", 5, 1, "1", &[5]),
            sc("S3", 6, 2, "1", &[3]),
            sc("Z/6", 6, 1, "1", &[6]),
            sc("D4", 8, 1, Z2, &[5, 2]),
            sc("D5", 10, 1, Z2, &[4, 2]),
            sc("A4", 12, 1, Z2, &[4, 3]),
            sc("D6", 12, 1, Z2, &[6, 3]),
            sc("GA(1,5)", 20, 1, "1", &[5]),
            sc("S4", 24, 1, Z2, &[5, 3]),
            sc("A5", 60, 1, Z2, &[5, 4]),
            sc("S5", 120, 1, Z2, &[7, 5]),
        ],
    }
}

/// Real character table: class sizes and one row per irreducible character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterTable {
    pub name: &'static str,
    pub class_sizes: Vec<i64>,
    pub characters: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn symmetric(n: u32) -> Option<Self> {
        let t = match n {
            3 => CharacterTable {
                name: "S3",
                class_sizes: vec![1, 3, 2],
                characters: vec![vec![1, 1, 1], vec![1, -1, 1], vec![2, 0, -1]],
            },
            // Classes: e, (12), (12)(34), (123), (1234).
            4 => CharacterTable {
                name: "S4",
                class_sizes: vec![1, 6, 3, 8, 6],
                characters: vec![
                    vec![1, 1, 1, 1, 1],
                    vec![1, -1, 1, 1, -1],
                    vec![2, 0, 2, -1, 0],
                    vec![3, 1, -1, 0, -1],
                    vec![3, -1, -1, 0, 1],
                ],
            },
            // Classes: e, (12), (12)(34), (123), (123)(45), (1234), (12345).
            5 => CharacterTable {
                name: "S5",
                class_sizes: vec![1, 10, 15, 20, 20, 30, 24],
                characters: vec![
                    vec![1, 1, 1, 1, 1, 1, 1],
                    vec![1, -1, 1, 1, -1, -1, 1],
                    vec![4, 2, 0, 1, -1, 0, -1],
                    vec![4, -2, 0, 1, 1, 0, -1],
                    vec![5, 1, 1, -1, 1, -1, 0],
                    vec![5, -1, 1, -1, -1, 1, 0],
                    vec![6, 0, -2, 0, 0, 0, 1],
                ],
            },
            _ => return None,
        };
        Some(t)
    }

    pub fn group_order(&self) -> i64 {
        self.class_sizes.iter().sum()
    }

    /// The representation ring: `N_{i,j}^k = <chi_i chi_j, chi_k>`.
    pub fn representation_ring(&self) -> FusionRing {
        let r = self.characters.len();
        let g = self.group_order();
        let chars = &self.characters;
        let sizes = &self.class_sizes;
        let labels = chars.iter().enumerate().map(|(i, c)| format!("chi{i}({})", c[0])).collect();
        FusionRing::from_fn(r, 0, (0..r).collect(), labels, |i, j, k| {
            let s: i64 = (0..sizes.len()).map(|c| sizes[c] * chars[i][c] * chars[j][c] * chars[k][c]).sum();
            debug_assert_eq!(s % g, 0);
            (s / g) as u32
        })
        .expect("representation rings satisfy the fusion axioms")
    }
}

/// A simply laced Dynkin diagram of type A, D or E.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AdeDiagram {
    pub family: char,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

impl AdeDiagram {
    pub fn new(family: char, n: usize) -> Option<Self> {
        let ok = match family {
            'A' => n >= 1,
            'D' => n >= 4,
            'E' => (6..=8).contains(&n),
            _ => false,
        };
        if !ok {
            return None;
        }
        let mut edges = Vec::new();
        let chain = if family == 'A' { n } else { n - 1 };
        for i in 1..chain {
            edges.push((i - 1, i));
        }
        match family {
            'D' => edges.push((n - 3, n - 1)),
            'E' => edges.push((2, n - 1)),
            _ => {}
        }
        Some(AdeDiagram { family, n, edges })
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.n)
    }

    pub fn coxeter_number(&self) -> usize {
        match (self.family, self.n) {
            ('A', n) => n + 1,
            ('D', n) => 2 * n - 2,
            ('E', 6) => 12,
            ('E', 7) => 18,
            _ => 30,
        }
    }

    /// Colour of each vertex in the bicolouring with vertex 0 coloured 0.
    pub fn colouring(&self) -> Vec<u8> {
        let mut c = vec![u8::MAX; self.n];
        c[0] = 0;
        let mut changed = true;
        while changed {
            changed = false;
            for &(a, b) in &self.edges {
                if c[a] != u8::MAX && c[b] == u8::MAX {
                    c[b] = 1 - c[a];
                    changed = true;
                } else if c[b] != u8::MAX && c[a] == u8::MAX {
                    c[a] = 1 - c[b];
                    changed = true;
                }
            }
        }
        c
    }

    /// Sizes of the two colour classes.
    pub fn colour_classes(&self) -> (usize, usize) {
        let c = self.colouring();
        let zeros = c.iter().filter(|&&x| x == 0).count();
        (zeros, self.n - zeros)
    }

    fn coloured_graph(&self, flip: bool) -> UnGraph<u8, ()> {
        let mut g = UnGraph::new_undirected();
        let nodes: Vec<_> = self.colouring().into_iter().map(|c| g.add_node(if flip { 1 - c } else { c })).collect();
        for &(a, b) in &self.edges {
            g.add_edge(nodes[a], nodes[b], ());
        }
        g
    }

    /// Number of bicoloured diagrams when a diagram automorphism that swaps
    /// the colours identifies the two bicolourings.
    pub fn bicolourings_up_to_symmetry(&self) -> usize {
        let swap = is_isomorphic_matching(&self.coloured_graph(false), &self.coloured_graph(true), |a, b| a == b, |_, _| true);
        if swap {
            1
        } else {
            2
        }
    }
}

/// All ADE diagrams with Coxeter number `h`.
pub fn ade_diagrams(h: usize) -> Vec<AdeDiagram> {
    let mut out = Vec::new();
    if h >= 2 {
        out.push(AdeDiagram::new('A', h - 1).unwrap());
    }
    if h % 2 == 0 && h >= 6 {
        out.push(AdeDiagram::new('D', h / 2 + 1).unwrap());
    }
    match h {
        12 => out.push(AdeDiagram::new('E', 6).unwrap()),
        18 => out.push(AdeDiagram::new('E', 7).unwrap()),
        30 => out.push(AdeDiagram::new('E', 8).unwrap()),
        _ => {}
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepEntry {
    pub label: String,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Enumeration {
    pub reps: Vec<RepEntry>,
    /// Set when the asymptotic category is not determined.
    pub open: bool,
    /// For `SO(3)_k`: the count after identifying bicolourings related by a
    /// diagram automorphism.
    pub identified_count: Option<usize>,
}

fn enumerate_group(g: GroupKind, prefix: &str) -> Vec<RepEntry> {
    let mut reps = Vec::new();
    for class in group_data(g) {
        for c in 0..class.count {
            for (w, &rank) in class.ranks.iter().enumerate() {
                let k = if class.count > 1 { format!("{}#{}", class.name, c + 1) } else { class.name.clone() };
                let omega = if w == 0 { "1".to_string() } else { format!("w{w}") };
                reps.push(RepEntry { label: format!("{prefix}K={k}, {omega}"), rank });
            }
        }
    }
    reps
}

/// Equivalence classes of simple transitive 2-representations for a tag.
pub fn enumerate_simple_transitives(kind: &CategoryKind) -> Enumeration {
    let plain = |reps| Enumeration { reps, open: false, identified_count: None };
    match kind {
        CategoryKind::Strict1x1 => plain(vec![RepEntry { label: "cell 2-representation".into(), rank: 1 }]),
        CategoryKind::VectElemAbelian(k) => plain(enumerate_group(GroupKind::ElemAbelian(*k), "")),
        CategoryKind::RepS3 => plain(enumerate_group(GroupKind::S3, "")),
        CategoryKind::RepS4 => plain(enumerate_group(GroupKind::S4, "")),
        CategoryKind::RepS5 => plain(enumerate_group(GroupKind::S5, "")),
        CategoryKind::VectZ2Twisted => plain(vec![RepEntry { label: "regular".into(), rank: 2 }]),
        CategoryKind::SO3(k) => {
            let diagrams = ade_diagrams(*k as usize + 2);
            let mut reps = Vec::new();
            for d in &diagrams {
                for colour in 0..2 {
                    reps.push(RepEntry { label: format!("{} (colouring {colour})", d.name()), rank: d.n });
                }
            }
            let identified = diagrams.iter().map(AdeDiagram::bicolourings_up_to_symmetry).sum();
            Enumeration { reps, open: false, identified_count: Some(identified) }
        }
        CategoryKind::AmbiguousH(_) => Enumeration { reps: vec![], open: true, identified_count: None },
    }
}

const VECT_Z2: &str = "Vect(Z/2)";
const VECT_Z2_TWISTED: &str = "Vect^s(Z/2)";
const SO3_3: &str = "SO(3)_3";
const M25: &str = "M(2,5)";

/// Cells of type H whose category is fixed or left open, with the
/// Grothendieck ring every diagonal H-cell must have.
fn h_type_entry(ty: CoxeterType, label: &str) -> Option<(CategoryKind, Option<FusionRing>)> {
    let open_b = || CategoryKind::AmbiguousH(vec![SO3_3.into(), M25.into()]);
    let open_c = || CategoryKind::AmbiguousH(vec![VECT_Z2.into(), VECT_Z2_TWISTED.into()]);
    let golden = || Some(FusionRing::so3(3));
    let z2 = || Some(FusionRing::elementary_abelian(1));
    match (ty.family(), ty.rank(), label) {
        (Family::H, 3, "1") | (Family::H, 4, "1") => Some((CategoryKind::SO3(3), golden())),
        (Family::H, 3, "1'") | (Family::H, 4, "2" | "2'" | "1'") => Some((open_b(), golden())),
        (Family::H, 3, "3=3'") | (Family::H, 4, "3" | "3'") => Some((open_c(), z2())),
        (Family::H, 4, "6=6'") => Some((CategoryKind::AmbiguousH(vec![]), None)),
        _ => None,
    }
}

/// Exceptional cells whose asymptotic category is the twisted `Vect(Z/2)`.
fn is_exceptional(ty: CoxeterType, label: &str) -> bool {
    matches!((ty.family(), ty.rank(), label), (Family::E, 7, "17") | (Family::E, 8, "13" | "13'"))
}

fn fingerprint(l: usize, ring: &FusionRing) -> Result<RingFingerprint> {
    let dims = ring.pf_dimensions::<f64>()?;
    let total = dims.iter().map(|d| d * d).sum();
    let mut sorted: Vec<f64> = dims.iter().map(|d| (d * 1e9).round() / 1e9).collect();
    sorted.sort_by(f64::total_cmp);
    Ok(RingFingerprint { left_cell: l, rank: ring.rank(), commutative: ring.is_commutative(), pf_dims: sorted, total_dim: total })
}

fn block_string(an: &CellAnalysis, j: usize) -> String {
    let cm = an.cells.cell_matrix(an.sys, j);
    match cm.blocks() {
        Ok((_, blocks)) => blocks
            .iter()
            .map(|row| row.iter().map(|b| format!("{}_{{{},{}}}", b.value, b.rows, b.cols)).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; "),
        Err(_) => "irregular".into(),
    }
}

/// Identifies the asymptotic category of two-sided cell `j`.
pub fn identify_category(an: &CellAnalysis, j: usize, budget: &Budget) -> Result<CategoryTag> {
    let cells = an.cells;
    let ty = cells.coxeter_type();
    let cell = &cells.two_sided()[j];
    let mut evidence = Evidence {
        cell_matrix: block_string(an, j),
        h_cell_sizes: cell.left_cells.iter().map(|&l| cells.diagonal_h_cell(an.sys, l).len()).collect(),
        rings: vec![],
        note: None,
    };
    if cells.is_strongly_regular(an.sys, j) {
        return Ok(CategoryTag { kind: CategoryKind::Strict1x1, evidence });
    }
    // One left cell per diagonal H-cell size, smallest first.
    let mut reps: Vec<usize> = Vec::new();
    let mut seen = Vec::new();
    for l in an.left_cells_by_h_size(j) {
        let size = cells.diagonal_h_cell(an.sys, l).len();
        if !seen.contains(&size) {
            seen.push(size);
            reps.push(l);
        }
    }
    let mut rings = Vec::new();
    for &l in &reps {
        let size = cells.diagonal_h_cell(an.sys, l).len();
        budget.check_h_entries(size * size * cells.left_cell(l).len())?;
        let block = an.h_block(l)?;
        let ring = FusionRing::from_h_block(an.sys, &block)?;
        evidence.rings.push(fingerprint(l, &ring)?);
        rings.push(ring);
    }
    let unrecognized = |evidence: &Evidence| {
        Error::UnrecognizedRing(format!(
            "{ty} cell {}: matrix [{}], rings {:?}",
            cell.label,
            evidence.cell_matrix,
            evidence.rings.iter().map(|r| (r.rank, r.commutative, r.pf_dims.clone())).collect::<Vec<_>>()
        ))
    };

    if let Some((kind, expected)) = h_type_entry(ty, &cell.label) {
        if let Some(expected) = expected {
            if !rings.iter().all(|r| r.is_isomorphic(&expected)) {
                return Err(unrecognized(&evidence));
            }
        }
        evidence.note = Some(match &kind {
            CategoryKind::SO3(_) => "fixed by a known classification of this cell".into(),
            CategoryKind::AmbiguousH(c) if c.is_empty() => "no candidate category is known".into(),
            _ => "the Grothendieck ring does not decide between the candidates".into(),
        });
        return Ok(CategoryTag { kind, evidence });
    }
    if let Some(k) = rings.iter().find_map(FusionRing::elementary_abelian_rank) {
        if is_exceptional(ty, &cell.label) && k == 1 {
            evidence.note = Some("exceptional cell".into());
            return Ok(CategoryTag { kind: CategoryKind::VectZ2Twisted, evidence });
        }
        return Ok(CategoryTag { kind: CategoryKind::VectElemAbelian(k), evidence });
    }
    for (n, kind) in [(3, CategoryKind::RepS3), (4, CategoryKind::RepS4), (5, CategoryKind::RepS5)] {
        let target = CharacterTable::symmetric(n).unwrap().representation_ring();
        if rings.iter().any(|r| r.is_isomorphic(&target)) {
            return Ok(CategoryTag { kind, evidence });
        }
    }
    if let Some(m) = ty.dihedral_order() {
        let middle = cell.a == 1;
        if middle && rings.iter().all(|r| r.is_isomorphic(&FusionRing::so3(m - 2))) {
            return Ok(CategoryTag { kind: CategoryKind::SO3(m - 2), evidence });
        }
    }
    Err(unrecognized(&evidence))
}

/// One row of a classification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationRecord {
    pub cell: usize,
    pub label: String,
    pub size: usize,
    pub a: usize,
    pub tag: Option<CategoryTag>,
    pub reps: Vec<RepEntry>,
    pub open: bool,
    /// Reason the cell was not identified (budget or unrecognized ring).
    pub skipped: Option<String>,
}

/// Identifies every two-sided cell; budget failures mark rows as skipped.
pub fn classify(an: &CellAnalysis, budget: &Budget) -> Result<Vec<ClassificationRecord>> {
    let mut out = Vec::new();
    for (j, cell) in an.cells.two_sided().iter().enumerate() {
        let mut rec = ClassificationRecord {
            cell: j,
            label: cell.label.clone(),
            size: cell.len(),
            a: cell.a,
            tag: None,
            reps: vec![],
            open: false,
            skipped: None,
        };
        match identify_category(an, j, budget) {
            Ok(tag) => {
                let e = enumerate_simple_transitives(&tag.kind);
                rec.reps = e.reps;
                rec.open = e.open;
                rec.tag = Some(tag);
            }
            Err(err @ (Error::BudgetExceeded(_) | Error::UnrecognizedRing(_))) => rec.skipped = Some(err.to_string()),
            Err(e) => return Err(e),
        }
        out.push(rec);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Markdown,
    Tsv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "md" | "markdown" => Ok(TableFormat::Markdown),
            "tsv" => Ok(TableFormat::Tsv),
            "json" => Ok(TableFormat::Json),
            _ => Err(Error::UnsupportedType(format!("output format {s}"))),
        }
    }
}

fn tag_text(r: &ClassificationRecord) -> String {
    match (&r.tag, &r.skipped) {
        (Some(t), _) => t.kind.to_string(),
        (None, Some(_)) => "skipped".into(),
        _ => String::new(),
    }
}

/// Renders the classification table of one type.
pub fn render_table(ty: CoxeterType, records: &[ClassificationRecord], format: TableFormat, with_reps: bool) -> String {
    match format {
        TableFormat::Json => {
            let v = serde_json::json!({ "type": ty.to_string(), "cells": records });
            serde_json::to_string_pretty(&v).expect("records serialize")
        }
        TableFormat::Tsv => {
            let mut s = String::from("cell\tsize\ta\tcategory\treps\n");
            for r in records {
                let reps = if with_reps {
                    r.reps.iter().map(|e| format!("{}:{}", e.label, e.rank)).collect::<Vec<_>>().join("; ")
                } else {
                    r.reps.iter().map(|e| e.rank.to_string()).collect::<Vec<_>>().join(",")
                };
                s.push_str(&format!("{}\t{}\t{}\t{}\t{}\n", r.label, r.size, r.a, tag_text(r), reps));
            }
            s
        }
        TableFormat::Markdown => {
            let row = |name: &str, cells: Vec<String>| format!("| {name} | {} |\n", cells.join(" | "));
            let mut s = format!("### {ty}\n\n");
            s += &row("cell", records.iter().map(|r| r.label.clone()).collect());
            s += &row("---", records.iter().map(|_| "---".to_string()).collect());
            s += &row("size", records.iter().map(|r| r.size.to_string()).collect());
            s += &row("a", records.iter().map(|r| r.a.to_string()).collect());
            s += &row("A_H", records.iter().map(tag_text).collect());
            if with_reps {
                s.push('\n');
                for r in records {
                    let ranks: Vec<String> = r.reps.iter().map(|e| e.rank.to_string()).collect();
                    let body = if r.open { "open".to_string() } else { ranks.join(", ") };
                    s += &format!("- cell {}: {} classes; ranks {}\n", r.label, r.reps.len(), body);
                }
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cells::CellDecomposition;
    use crate::coxeter::CoxeterSystem;
    use crate::hecke::build_wgraph;
    use std::collections::{BTreeSet, HashSet};

    type Perm = Vec<u8>;

    fn compose(p: &Perm, q: &Perm) -> Perm {
        q.iter().map(|&i| p[i as usize]).collect()
    }

    fn closure(gens: &[Perm], n: usize) -> BTreeSet<Perm> {
        let id: Perm = (0..n as u8).collect();
        let mut set = BTreeSet::from([id.clone()]);
        let mut frontier = vec![id];
        while let Some(x) = frontier.pop() {
            for g in gens {
                let y = compose(g, &x);
                if set.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn all_perms(n: usize) -> Vec<Perm> {
        closure(&[(1..n as u8).chain([0]).collect(), { let mut t: Perm = (0..n as u8).collect(); t.swap(0, 1); t }], n)
            .into_iter()
            .collect()
    }

    fn inverse(p: &Perm) -> Perm {
        let mut q = p.clone();
        for (i, &x) in p.iter().enumerate() {
            q[x as usize] = i as u8;
        }
        q
    }

    fn conjugacy_classes(k: &BTreeSet<Perm>) -> usize {
        let mut seen = HashSet::new();
        let mut count = 0;
        for x in k {
            if seen.contains(x) {
                continue;
            }
            count += 1;
            for g in k {
                seen.insert(compose(&compose(g, x), &inverse(g)));
            }
        }
        count
    }

    /// Conjugacy classes of subgroups of S_n as `(order, #classes of K)`.
    fn subgroup_classes(n: usize) -> Vec<(usize, usize)> {
        let g = all_perms(n);
        let mut subs: HashSet<BTreeSet<Perm>> = HashSet::new();
        for a in &g {
            for b in &g {
                subs.insert(closure(&[a.clone(), b.clone()], n));
            }
        }
        let mut reps: Vec<BTreeSet<Perm>> = Vec::new();
        let mut done: HashSet<BTreeSet<Perm>> = HashSet::new();
        for s in subs {
            if done.contains(&s) {
                continue;
            }
            for x in &g {
                let conj: BTreeSet<Perm> = s.iter().map(|h| compose(&compose(x, h), &inverse(x))).collect();
                done.insert(conj);
            }
            reps.push(s);
        }
        let mut out: Vec<(usize, usize)> = reps.iter().map(|k| (k.len(), conjugacy_classes(k))).collect();
        out.sort_unstable();
        out
    }

    fn table_classes(g: GroupKind) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for c in group_data(g) {
            for _ in 0..c.count {
                out.push((c.order, c.ranks[0]));
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn subgroup_tables_match_brute_force() {
        assert_eq!(table_classes(GroupKind::S3), subgroup_classes(3));
        assert_eq!(table_classes(GroupKind::S4), subgroup_classes(4));
        assert_eq!(table_classes(GroupKind::S5), subgroup_classes(5));
    }

    /// Number of `l`-dimensional subspaces of `F_2^k`, by enumerating spans.
    fn subspaces(k: u32, l: u32) -> u64 {
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        let n = 1u32 << k;
        let mut stack = vec![vec![0u32]];
        while let Some(span) = stack.pop() {
            if !seen.insert(span.clone()) {
                continue;
            }
            for v in 0..n {
                if !span.contains(&v) {
                    let mut s: Vec<u32> = span.iter().flat_map(|&x| [x, x ^ v]).collect();
                    s.sort_unstable();
                    s.dedup();
                    stack.push(s);
                }
            }
        }
        seen.iter().filter(|s| s.len() == 1 << l).count() as u64
    }

    #[test]
    fn gaussian_counts_match_subspace_enumeration() {
        for k in 0..=4 {
            for l in 0..=k {
                assert_eq!(gaussian_binomial_2(k, l), subspaces(k, l), "k={k} l={l}");
            }
        }
    }

    #[test]
    fn enumeration_counts() {
        let e = enumerate_simple_transitives(&CategoryKind::VectElemAbelian(2));
        let mut ranks: Vec<usize> = e.reps.iter().map(|r| r.rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, vec![1, 1, 2, 2, 2, 4]);
        let e = enumerate_simple_transitives(&CategoryKind::RepS3);
        let mut ranks: Vec<usize> = e.reps.iter().map(|r| r.rank).collect();
        ranks.sort_unstable();
        assert_eq!(ranks, vec![1, 2, 3, 3]);
        assert_eq!(enumerate_simple_transitives(&CategoryKind::RepS4).reps.len(), 16);
        let e = enumerate_simple_transitives(&CategoryKind::VectZ2Twisted);
        assert_eq!(e.reps, vec![RepEntry { label: "regular".into(), rank: 2 }]);
        assert!(enumerate_simple_transitives(&CategoryKind::AmbiguousH(vec![])).open);
        // Vect rule: rank * |K| = |G| for each class.
        for k in 0..=4u32 {
            for c in group_data(GroupKind::ElemAbelian(k)) {
                for &r in &c.ranks {
                    assert_eq!(r * c.order, 1 << k);
                }
            }
        }
    }

    #[test]
    fn character_tables_are_orthonormal() {
        for n in 3..=5 {
            let t = CharacterTable::symmetric(n).unwrap();
            let g = t.group_order();
            let fact: i64 = (1..=n as i64).product();
            assert_eq!(g, fact);
            for a in &t.characters {
                for b in &t.characters {
                    let ip: i64 = (0..a.len()).map(|c| t.class_sizes[c] * a[c] * b[c]).sum();
                    assert_eq!(ip, if a == b { g } else { 0 });
                }
            }
            let ring = t.representation_ring();
            let dims = ring.pf_dimensions::<f64>().unwrap();
            for (d, chi) in dims.iter().zip(&t.characters) {
                assert!((d - chi[0] as f64).abs() < 1e-9);
            }
        }
    }

    /// Coxeter number from the largest adjacency eigenvalue `2 cos(pi/h)`.
    fn spectral_coxeter_number(d: &AdeDiagram) -> usize {
        let n = d.n;
        let mut v = vec![1.0f64; n];
        let mut lambda = 0.0;
        for _ in 0..20000 {
            let mut w = v.clone();
            for &(a, b) in &d.edges {
                w[a] += v[b];
                w[b] += v[a];
            }
            let norm = w.iter().cloned().fold(0.0, f64::max);
            lambda = norm - 1.0;
            v = w.iter().map(|x| x / norm).collect();
        }
        let _ = lambda;
        let mut av = vec![0.0; n];
        for &(a, b) in &d.edges {
            av[a] += v[b];
            av[b] += v[a];
        }
        let lam = av.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
        (std::f64::consts::PI / (lam / 2.0).acos()).round() as usize
    }

    #[test]
    fn ade_coxeter_numbers() {
        for h in [3, 4, 6, 12, 18, 30] {
            let names: Vec<String> = ade_diagrams(h).iter().map(AdeDiagram::name).collect();
            let mut expect = vec![format!("A{}", h - 1)];
            if h % 2 == 0 && h >= 6 {
                expect.push(format!("D{}", h / 2 + 1));
            }
            match h {
                12 => expect.push("E6".into()),
                18 => expect.push("E7".into()),
                30 => expect.push("E8".into()),
                _ => {}
            }
            assert_eq!(names, expect);
            for d in ade_diagrams(h) {
                assert_eq!(d.edges.len(), d.n - 1);
                assert_eq!(spectral_coxeter_number(&d), h, "{}", d.name());
            }
        }
        assert_eq!(AdeDiagram::new('A', 4).unwrap().bicolourings_up_to_symmetry(), 1);
        assert_eq!(AdeDiagram::new('A', 5).unwrap().bicolourings_up_to_symmetry(), 2);
        assert_eq!(AdeDiagram::new('E', 6).unwrap().bicolourings_up_to_symmetry(), 2);
        assert_eq!(AdeDiagram::new('D', 5).unwrap().colour_classes(), (2, 3));
    }

    fn classify_type(t: &str) -> Vec<ClassificationRecord> {
        let sys = CoxeterSystem::build(t.parse().unwrap()).unwrap();
        let wg = build_wgraph(&sys, &Budget::unlimited()).unwrap();
        let c = CellDecomposition::compute(&sys, &wg).unwrap();
        let an = CellAnalysis::new(&sys, &wg, &c);
        classify(&an, &Budget::default()).unwrap()
    }

    #[test]
    fn type_a_is_strongly_regular() {
        for r in classify_type("A3") {
            assert_eq!(r.tag.unwrap().kind, CategoryKind::Strict1x1);
            assert_eq!(r.reps.len(), 1);
        }
    }

    #[test]
    fn b3_and_dihedral_tags() {
        let kinds: Vec<CategoryKind> = classify_type("B3").into_iter().map(|r| r.tag.unwrap().kind).collect();
        assert!(kinds.iter().any(|k| *k == CategoryKind::VectElemAbelian(1)));
        let recs = classify_type("I2(7)");
        assert_eq!(recs[1].tag.as_ref().unwrap().kind, CategoryKind::SO3(5));
        assert_eq!(recs[1].reps.len(), 2);
        assert!(recs[1].reps.iter().all(|r| r.rank == 6));
    }

    #[test]
    fn h3_tags() {
        let recs = classify_type("H3");
        let kinds: Vec<String> = recs.iter().map(|r| r.tag.as_ref().unwrap().kind.to_string()).collect();
        assert_eq!(
            kinds,
            [
                "strongly regular",
                "SO(3)_3",
                "strongly regular",
                "open: Vect(Z/2) or Vect^s(Z/2)",
                "strongly regular",
                "open: SO(3)_3 or M(2,5)",
                "strongly regular"
            ]
        );
        let md = render_table(CoxeterType::new(Family::H, 3).unwrap(), &recs, TableFormat::Markdown, true);
        assert!(md.contains("| size | 1 | 18 | 25 | 32 | 25 | 18 | 1 |"));
    }

    #[test]
    fn formats_parse() {
        assert_eq!("tsv".parse::<TableFormat>().unwrap(), TableFormat::Tsv);
        assert!("xml".parse::<TableFormat>().is_err());
    }
}
