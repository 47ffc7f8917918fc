//! Acceptance sweep over the six test algebras. Prints one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use derived_discrete::gamma::GammaWindow;
use derived_discrete::indecomposables::QuadWindow;
use derived_discrete::verify::{run_suite, Suite, VerifyConfig};
use derived_discrete::Algebra;

const ALGEBRAS: [(i64, i64); 6] = [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (3, 2)];

fn config(suite: Suite) -> VerifyConfig {
    let gamma = match suite {
        Suite::Triangles => GammaWindow::square(-6, 6),
        _ => GammaWindow::square(-4, 4),
    };
    let mut cfg = VerifyConfig::new(QuadWindow::new(-3, 3, 5), gamma);
    cfg.instances = 100;
    cfg.min_triangles = 50;
    cfg
}

fn main() -> ExitCode {
    let mut all = true;
    for (i, suite) in Suite::ALL.into_iter().enumerate() {
        let start = Instant::now();
        let cfg = config(suite);
        let mut checked = 0;
        let mut problems = Vec::new();
        for (n, m) in ALGEBRAS {
            let alg = Algebra::new(n, m).expect("test algebra");
            match run_suite(&alg, suite, &cfg) {
                Ok(r) => {
                    checked += r.checked;
                    if !r.passed {
                        problems.push(format!(
                            "({n},{m}): {} failures, {}",
                            r.failures,
                            r.counterexample.unwrap_or_default()
                        ));
                    }
                }
                Err(e) => problems.push(format!("({n},{m}): {e}")),
            }
        }
        let ok = problems.is_empty();
        all &= ok;
        println!(
            "criterion {:>2} {:<15} {} ({checked} checked, {:.1}s)",
            i + 1,
            suite.name(),
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
        for p in problems {
            println!("    {p}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
