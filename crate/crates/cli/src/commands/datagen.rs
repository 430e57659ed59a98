//! `rcs datagen`: synthetic dataset generation.

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use rcs_core::{data, RngState, Vector};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct DatagenArgs {
    #[command(subcommand)]
    pub family: DatagenFamily,
}

#[derive(Debug, Subcommand)]
pub enum DatagenFamily {
    /// Robust regression data: Gaussian design, sparse signal, heavy
    /// outliers on a fraction of the rows.
    Mestimator {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Number of nonzeros in the planted signal.
        #[arg(long)]
        s: usize,
        #[arg(long, default_value_t = 0.0)]
        pfail: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Overwrite existing output files.
        #[arg(long)]
        force: bool,
    },
    /// Phase retrieval data from a sign-modulated Hadamard design
    /// (`n = m * d` rows).
    Pr {
        /// Signal dimension; must be a power of two.
        #[arg(long)]
        d: usize,
        /// Number of sign-modulated blocks.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0.0)]
        pfail: f64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Optional P2 image whose pixels become the planted signal
        /// (width * height must equal d).
        #[arg(long)]
        xstar_pgm: Option<PathBuf>,
        /// Floor negative outlier draws at zero.
        #[arg(long)]
        clip_outliers: bool,
        #[arg(long)]
        force: bool,
    },
}

pub fn run(args: DatagenArgs) -> Result<()> {
    match args.family {
        DatagenFamily::Mestimator { n, d, s, pfail, seed, out, force } => {
            check_output(&out, force)?;
            let cfg = data::MEstimatorGenConfig { n, d, sparsity: s, p_fail: pfail, seed };
            let gen = data::generate_mestimator_data(&cfg)?;
            let dataset = data::Dataset {
                matrix: gen.matrix,
                measurements: gen.rhs,
                x_star: gen.x_star,
            };
            data::write_dataset(&out, &dataset)?;
            data::write_meta(
                &out,
                &data::DatasetMeta {
                    family: "mestimator".into(),
                    n,
                    d,
                    sparsity: Some(s),
                    repeats: None,
                    p_fail: pfail,
                    seed,
                    clip_outliers: None,
                },
            )?;
            eprintln!("wrote {} ({n} x {d}, {s}-sparse signal)", out.display());
        }
        DatagenFamily::Pr { d, m, pfail, seed, out, xstar_pgm, clip_outliers, force } => {
            check_output(&out, force)?;
            // One stream drives the sign diagonals, then the signal (when
            // synthetic), then the outliers; the seed pins everything.
            let mut rng = RngState::new(seed);
            let design = data::HadamardDesign::new(d, m, &mut rng)?;
            let x_star = match &xstar_pgm {
                Some(path) => {
                    let (w, h, values) = data::read_pgm(path)?;
                    if w * h != d {
                        bail!("image has {} pixels, expected d = {d}", w * h);
                    }
                    Vector::new(values)?
                }
                None => Vector::new((0..d).map(|_| rng.normal()).collect())?,
            };
            let gen = data::generate_pr_data(&design, &x_star, pfail, &mut rng, clip_outliers)?;
            let dataset = data::Dataset {
                matrix: gen.matrix,
                measurements: gen.b_sq,
                x_star: gen.x_star,
            };
            data::write_dataset(&out, &dataset)?;
            data::write_meta(
                &out,
                &data::DatasetMeta {
                    family: "pr".into(),
                    n: m * d,
                    d,
                    sparsity: None,
                    repeats: Some(m),
                    p_fail: pfail,
                    seed,
                    clip_outliers: Some(clip_outliers),
                },
            )?;
            eprintln!("wrote {} ({} x {d} sensing matrix)", out.display(), m * d);
        }
    }
    Ok(())
}

fn check_output(path: &std::path::Path, force: bool) -> Result<()> {
    if path.exists() && !force {
        bail!("{} exists; pass --force to overwrite", path.display());
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating {}", parent.display()))?;
        }
    }
    Ok(())
}
