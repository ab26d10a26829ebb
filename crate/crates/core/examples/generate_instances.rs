//! Sample planted instances from each model and write one as matrix JSON.
//!
//! cargo run --example generate_instances -- [out.json]

use sosgap::models::{generate, MatrixFile, ModelParams, Noise};

fn main() -> sosgap::Result<()> {
    let models = [
        ModelParams::submatrix(12, 4, 1.5, Noise::Gaussian { sigma: 1.0 }, 7),
        ModelParams::submatrix(12, 4, 2.0, Noise::Gaussian { sigma: 0.0 }, 7),
        ModelParams::submatrix(12, 4, 0.0, Noise::Rademacher { nu: 1.0 }, 7),
        ModelParams::sbm(12, 4, 0.9, 0.2, 7),
    ];
    for params in &models {
        let inst = generate(params)?;
        let x = &inst.matrix;
        let inside: f64 =
            x.pairs().filter(|(i, j, _)| inst.support.contains(i) && inst.support.contains(j)).map(|p| p.2).sum();
        let k = inst.support.len();
        println!(
            "{:<10} {:<22} support {:?}  block mean {:+.3}  max entry {:+.3}",
            params.model_label(),
            params.noise_label(),
            inst.support,
            inside / (k * (k - 1) / 2) as f64,
            x.max_entry()
        );
    }

    if let Some(path) = std::env::args().nth(1) {
        let inst = generate(&models[0])?;
        MatrixFile::from_instance(&inst).write(path.as_ref())?;
        println!("wrote {path}");
    }
    Ok(())
}
