use sgn_core::scenarios::{builtin_scenario, convergence_study};

fn main() {
    let base = builtin_scenario("soliton-flat").expect("built-in scenario");
    for (degree, meshes) in [(3usize, vec![80usize, 100, 120, 140, 160]), (5, vec![20, 40, 60])] {
        let table = convergence_study(&base, degree, &meshes).expect("convergence study");
        println!("N = {degree}");
        print!("{}", table.to_csv());
        if let Some(f) = &table.failure {
            println!("aborted: {f}");
        }
        for r in &table.rows {
            println!("  N_x={} steps={} wall={:.2}s", r.cells, r.steps, r.wall_time.as_secs_f64());
        }
    }
}
