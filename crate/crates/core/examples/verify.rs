//! Run the built-in self-checks, optionally restricted to one tag.

use rotor::suite::{run_suite, SuiteOptions};

fn main() {
    let filter = std::env::args().nth(1);
    let results = run_suite(&SuiteOptions { filter, inject_fault: false });
    for r in &results {
        println!("{}", r.line());
    }
    let failed = results.iter().filter(|r| !r.passed()).count();
    println!("{} checks, {failed} failed", results.len());
}
