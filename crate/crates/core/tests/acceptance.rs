//! One line per acceptance criterion. Set `HECKE_CELLS_SKIP_STRETCH` to
//! leave out the H4/B6 criterion.

use hecke_cells::acceptance::{run_all, stretch_budget};

fn main() {
    let stretch = std::env::var_os("HECKE_CELLS_SKIP_STRETCH").is_none().then(stretch_budget);
    let outcomes = run_all(stretch.as_ref());
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed && !o.skipped).count();
    println!("{} passed, {failed} failed, {} skipped", outcomes.iter().filter(|o| o.passed).count(), outcomes.iter().filter(|o| o.skipped).count());
    if failed > 0 {
        std::process::exit(1);
    }
}
