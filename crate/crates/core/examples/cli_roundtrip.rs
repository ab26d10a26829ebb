//! Drive the `sosgap` command line in-process: generate K4, certify it, then
//! estimate and solve on the same file.

use sosgap::lab::cli::cli_main;

fn sosgap(args: &[&str]) -> i32 {
    println!("$ sosgap {}", args.join(" "));
    let argv = std::iter::once("sosgap").chain(args.iter().copied());
    cli_main(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

fn main() {
    let dir = std::env::temp_dir().join("sosgap-cli-example");
    std::fs::create_dir_all(&dir).unwrap();
    let k4 = dir.join("k4.json");
    let k4 = k4.to_str().unwrap();

    let steps: [&[&str]; 5] = [
        &[
            "generate",
            "--model",
            "sbm",
            "--d",
            "4",
            "--s",
            "2",
            "--beta",
            "1",
            "--beta-tilde",
            "1",
            "--seed",
            "1",
            "--out",
            k4,
        ],
        &["certify", "--in", k4, "--level", "1", "--s", "2", "--mode", "binary"],
        &["estimate", "--in", k4, "--estimator", "scan", "--s", "3"],
        &["estimate", "--in", k4, "--estimator", "lp", "--s", "3"],
        &["solve", "--in", k4, "--level", "1", "--s", "3"],
    ];
    for args in steps {
        let code = sosgap(args);
        if code != 0 {
            std::process::exit(code);
        }
    }
}
