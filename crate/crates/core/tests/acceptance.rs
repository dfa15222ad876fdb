//! Runs every acceptance criterion and prints one line per criterion.

use fraczeta::acceptance::run;

#[test]
fn acceptance_matrix() {
    let outcomes = run("all").unwrap();
    println!();
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
