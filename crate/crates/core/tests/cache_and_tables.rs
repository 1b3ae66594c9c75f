use hecke_cells::acceptance::Group;
use hecke_cells::cache::{load_or_build_wgraph, wgraph_path};
use hecke_cells::classify::{classify, render_table, TableFormat};
use hecke_cells::hecke::build_wgraph;
use hecke_cells::{Budget, CoxeterSystem};

#[test]
fn cached_wgraph_matches_a_fresh_build() {
    let dir = tempfile::tempdir().unwrap();
    let sys = CoxeterSystem::build("B3".parse().unwrap()).unwrap();
    let budget = Budget::default();
    let first = load_or_build_wgraph(Some(dir.path()), &sys, &budget).unwrap();
    assert!(wgraph_path(dir.path(), &sys).exists());
    let second = load_or_build_wgraph(Some(dir.path()), &sys, &budget).unwrap();
    assert_eq!(first, second);
    assert_eq!(first, build_wgraph(&sys, &budget).unwrap());
}

#[test]
fn corrupt_cache_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let sys = CoxeterSystem::build("A3".parse().unwrap()).unwrap();
    std::fs::write(wgraph_path(dir.path(), &sys), b"not a cache file").unwrap();
    assert!(load_or_build_wgraph(Some(dir.path()), &sys, &Budget::default()).is_err());
}

#[test]
fn table_formats_agree() {
    let g = Group::parse("B3", &Budget::default()).unwrap();
    let recs = classify(&g.analysis(), &Budget::default()).unwrap();
    let ty = g.sys.coxeter_type();
    let json: serde_json::Value = serde_json::from_str(&render_table(ty, &recs, TableFormat::Json, false)).unwrap();
    assert_eq!(json["cells"].as_array().unwrap().len(), recs.len());
    let tsv = render_table(ty, &recs, TableFormat::Tsv, false);
    assert_eq!(tsv.lines().count(), recs.len() + 1);
    let md = render_table(ty, &recs, TableFormat::Markdown, true);
    assert!(md.lines().count() >= recs.len() + 2);
    assert_eq!(render_table(ty, &recs, TableFormat::Markdown, true), md);
}

#[test]
fn budget_refuses_large_groups() {
    let err = Group::parse("B6", &Budget::default()).err().unwrap();
    assert!(matches!(err, hecke_cells::Error::BudgetExceeded(_)));
}
