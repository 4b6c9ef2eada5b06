//! Writes a generated problem as Matrix Market files, runs the driver on the
//! files, and prints the JSON-lines report.

use quantum_tikhonov::io::{
    format_matrix, generate_problem, load_matrix, run, save_matrix, save_vector, Method,
    ProblemKind, ProblemSource, RunConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("qtik-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let (matrix, rhs) = (dir.join("a.mtx"), dir.join("b.mtx"));

    let problem = generate_problem(ProblemKind::HilbertLike, 4, 3, 1e-3, 1)?;
    save_matrix(&matrix, &problem.a)?;
    save_vector(&rhs, &problem.b)?;
    print!("{}", format_matrix(&problem.a));
    assert_eq!(load_matrix(&matrix)?, problem.a);

    let cfg = RunConfig {
        problem: ProblemSource::Files { matrix, rhs },
        method: Method::ClassicalGcv,
        p: 5,
        ..Default::default()
    };
    let report = run(&cfg)?;
    print!("\n{}", report.to_jsonl());
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
