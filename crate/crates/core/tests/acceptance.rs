use joyce_tau::verify::{manifest, run_check, VerifyOptions};

fn main() {
    let opts = VerifyOptions::default();
    let mut failed = Vec::new();
    for check in manifest() {
        match run_check(check.id, &opts) {
            Ok(outcome) => {
                println!("{}", outcome.summary());
                for n in &outcome.notes {
                    println!("    {n}");
                }
                if !outcome.passed {
                    failed.push(check.id);
                }
            }
            Err(e) => {
                println!("FAIL {}  error: {e}", check.id);
                failed.push(check.id);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
