use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvenet::gordon::compute_intersections;
use curvenet::io::{export_mesh, parse_json, tessellate, CstSpec, MeshFormat, NetworkDocument, SurfaceDocument};
use curvenet::profiles::cst_evaluate;
use curvenet::skinning::loft;
use curvenet::{build_gordon_surface, Error, Surface};

/// Gordon-surface construction from profile/guide curve networks.
#[derive(Parser, Debug)]
#[command(name = "curvenet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the Gordon surface of a network and export it as a mesh.
    Gordon {
        network: PathBuf,
        #[command(flatten)]
        mesh: MeshArgs,
        /// Overrides the approximation tolerance of the reparametrization.
        #[arg(long)]
        approx_tol: Option<f64>,
        /// Overrides the profile/guide intersection tolerance.
        #[arg(long)]
        intersect_tol: Option<f64>,
    },
    /// Skin the profiles of a document and export the surface as a mesh.
    Skin {
        profiles: PathBuf,
        #[command(flatten)]
        mesh: MeshArgs,
    },
    /// Sample a CST curve into a `psi,zeta` CSV file.
    Airfoil {
        /// JSON file with n1, n2, coefficients and zeta_te.
        #[arg(long)]
        cst: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Number of evenly spaced samples.
        #[arg(long, default_value_t = 101)]
        n: usize,
    },
    /// Print the point of a surface document at (u, v).
    Eval {
        surface: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: f64,
        #[arg(long, allow_hyphen_values = true)]
        v: f64,
    },
    /// Validate a network and print its intersection grid.
    Check { network: PathBuf },
}

#[derive(Args, Debug)]
struct MeshArgs {
    /// Mesh file; `.obj` selects OBJ, anything else ASCII STL.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 33)]
    nu: usize,
    #[arg(long, default_value_t = 33)]
    nv: usize,
    /// Also write the surface as a JSON document.
    #[arg(long)]
    surface_out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Kernel(String, Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Kernel(e.to_string(), e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Kernel(msg, e)) => {
            eprintln!("error: {msg}");
            ExitCode::from(if e.is_numeric() { 2 } else { 1 })
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_network(path: &Path) -> Result<NetworkDocument, Failure> {
    NetworkDocument::parse(&read(path)?).map_err(|e| Failure::Kernel(format!("{}: {e}", path.display()), e))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Gordon { network, mesh, approx_tol, intersect_tol } => {
            let doc = load_network(&network)?;
            let mut config = doc.config();
            if approx_tol.is_some() {
                config.approx_tol = approx_tol;
            }
            if intersect_tol.is_some() {
                config.intersection_tol = intersect_tol;
            }
            let built = doc
                .network()
                .and_then(|net| build_gordon_surface(&net, &config))
                .map_err(|e| Failure::Kernel(doc.describe(&e), e))?;
            write_mesh(&built.surface, &mesh)
        }
        Command::Skin { profiles, mesh } => {
            let doc = load_network(&profiles)?;
            let surface = loft(&doc.profile_curves()?)?;
            write_mesh(&surface, &mesh)
        }
        Command::Airfoil { cst, out, n } => {
            if n < 2 {
                return Err(Failure::Usage("--n must be at least 2".into()));
            }
            let spec: CstSpec = parse_json(&read(&cst)?)?;
            let params = spec.parameters()?;
            let mut w = create(&out)?;
            let mut text = String::from("psi,zeta\n");
            for i in 0..n {
                let psi = if i + 1 == n { 1.0 } else { i as f64 / (n - 1) as f64 };
                text.push_str(&format!("{psi},{}\n", cst_evaluate(&params, psi)?));
            }
            w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(Error::from)?;
            Ok(())
        }
        Command::Eval { surface, u, v } => {
            let s = SurfaceDocument::parse(&read(&surface)?)?.to_surface()?;
            let p = s.evaluate(u, v)?;
            println!("{} {} {}", p.x(), p.y(), p.z());
            Ok(())
        }
        Command::Check { network } => {
            let doc = load_network(&network)?;
            let net = doc.network()?;
            let tol = doc.config().intersection_tol.unwrap_or(net.diagonal() * 1e-7);
            let grid = compute_intersections(&net.normalized()?, tol).map_err(|e| Failure::Kernel(doc.describe(&e), e))?;
            println!("{} profiles x {} guides, intersection tolerance {tol:e}", doc.profiles.len(), doc.guides.len());
            for (k, p) in doc.profiles.iter().enumerate() {
                for (l, g) in doc.guides.iter().enumerate() {
                    println!(
                        "{} x {}: u = {:.12} v = {:.12} gap = {:e}",
                        p.name, g.name, grid.u_tilde[k][l], grid.v_tilde[k][l], grid.gaps[k][l]
                    );
                }
            }
            Ok(())
        }
    }
}

fn write_mesh(surface: &Surface, args: &MeshArgs) -> Result<(), Failure> {
    let grid = tessellate(surface, args.nu, args.nv)?;
    let format = match args.out.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("obj") => MeshFormat::Obj,
        _ => MeshFormat::StlAscii,
    };
    let mut w = create(&args.out)?;
    export_mesh(&grid, format, &mut w)?;
    if let Some(path) = &args.surface_out {
        let mut w = create(path)?;
        let text = SurfaceDocument::from_surface(surface).to_json();
        w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(Error::from)?;
    }
    Ok(())
}
