//! Drive the command-line front end from a JSON configuration in-process.

use rotor::runner::{run, RunConfig};

fn main() -> rotor::Result<()> {
    let config = RunConfig::from_json(
        r#"{
            "command": "kinematics",
            "curve": {"kind": "expr", "expr": {"x": "cos(t)", "y": "sin(t)", "z": "t/4"}, "domain": [0, 3]},
            "frame": "point:-2,-2,-1",
            "samples": 4,
            "format": "json"
        }"#,
    )?;
    let outcome = run(&config);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    println!("exit code {}", outcome.code);
    Ok(())
}
