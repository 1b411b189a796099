//! Command-line pipeline: synthesize boundary maps from finite laminations,
//! extract earthquakes through the Anti-de Sitter convex hull, verify the
//! earthquake axioms, and render SVG figures.
//!
//! Exit codes: 0 success / verification pass, 1 verification failure,
//! 2 malformed or invalid input, 3 flat hull (the map is a single isometry).

use adsquake::circlemap::PiecewiseMobiusCircleMap;
use adsquake::earthquake::{boundary_agreement, strata_map, verify_earthquake};
use adsquake::hull::{HullComplex, HullError, HullSide};
use adsquake::schema::{
    from_json_str, to_json_string, AnyInput, CircleMapFile, EarthquakeFile, LaminationFile,
    ReportFile,
};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_FLAT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "adsquake",
    about = "Earthquake maps of the hyperbolic plane via convex hulls in Anti-de Sitter 3-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize the boundary map of a finite earthquake from a lamination
    /// spec; writes the circle map and the ground-truth earthquake.
    Synthesize {
        /// lamination JSON (leaves as endpoint pairs, weights, side)
        input: PathBuf,
        /// output circle-map JSON
        #[arg(long)]
        out: PathBuf,
        /// output ground-truth earthquake JSON (default: <out>.truth.json)
        #[arg(long)]
        truth_out: Option<PathBuf>,
    },
    /// Run the full pipeline on a circle map: separating chart, hull,
    /// pleated boundary, earthquake. Exit 3 when the map is a single
    /// Möbius class (flat hull).
    Extract {
        /// circle-map JSON
        input: PathBuf,
        /// output earthquake JSON
        #[arg(long)]
        out: PathBuf,
        /// which earthquake to produce: left (past boundary) or right (future)
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        /// number of boundary samples
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        /// interpolation parameter on discontinuity leaves
        #[arg(long, default_value_t = 0.5)]
        leaf_t: f64,
        /// seed for the deterministic sampling phase
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// write the merged hull as an OFF mesh
        #[arg(long)]
        dump_hull: Option<PathBuf>,
    },
    /// Check the earthquake axioms; with --map also the boundary agreement.
    Verify {
        /// earthquake JSON
        input: PathBuf,
        /// circle-map JSON to compare the boundary extension against
        #[arg(long)]
        map: Option<PathBuf>,
        /// write the machine-readable report here
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Render an earthquake (Poincaré disc) or a circle map (torus square)
    /// to SVG.
    Render {
        /// earthquake or circle-map JSON
        input: PathBuf,
        /// output SVG
        #[arg(long)]
        out: PathBuf,
        /// overlay the image of a reference grid under the earthquake
        #[arg(long, default_value_t = false)]
        overlay: bool,
    },
}

fn read_file(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_BAD_INPUT
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), u8> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_BAD_INPUT
    })
}

fn load_map(path: &Path) -> Result<PiecewiseMobiusCircleMap, u8> {
    let text = read_file(path)?;
    let file: CircleMapFile = from_json_str(&text).map_err(|e| {
        eprintln!("error: malformed circle map {}: {e}", path.display());
        EXIT_BAD_INPUT
    })?;
    let f = file.to_map().map_err(|e| {
        eprintln!("error: invalid circle map {}: {e}", path.display());
        EXIT_BAD_INPUT
    })?;
    let report = f.validate();
    if let Some(v) = report.violation {
        eprintln!("error: circle map violates invariants: {v}");
        return Err(EXIT_BAD_INPUT);
    }
    Ok(f)
}

/// Deterministic sampling phase in [0, 1) derived from the seed.
fn phase_from_seed(seed: u64) -> f64 {
    let mut z = seed.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

fn cmd_synthesize(input: &Path, out: &Path, truth_out: Option<PathBuf>) -> Result<(), u8> {
    let text = read_file(input)?;
    let file: LaminationFile = from_json_str(&text).map_err(|e| {
        eprintln!("error: malformed lamination {}: {e}", input.display());
        EXIT_BAD_INPUT
    })?;
    let spec = file.to_spec().map_err(|e| {
        eprintln!("error: invalid lamination {}: {e}", input.display());
        EXIT_BAD_INPUT
    })?;
    let (f, truth) = adsquake::circlemap::finite_earthquake_boundary(&spec).map_err(|e| {
        eprintln!("error: invalid lamination spec: {e}");
        EXIT_BAD_INPUT
    })?;
    let map_json = to_json_string(&CircleMapFile::from_map(&f)).map_err(|_| EXIT_BAD_INPUT)?;
    write_file(out, &map_json)?;
    let truth_path = truth_out.unwrap_or_else(|| {
        let mut p = out.as_os_str().to_owned();
        p.push(".truth.json");
        PathBuf::from(p)
    });
    let truth_json =
        to_json_string(&EarthquakeFile::from_earthquake(&truth)).map_err(|_| EXIT_BAD_INPUT)?;
    write_file(&truth_path, &truth_json)?;
    let mut report = verify_earthquake(&truth);
    report.boundary_sup_error = Some(boundary_agreement(&truth, &f, 1000));
    println!(
        "synthesized {} leaves, {} strata; verifier: {} ({} pairs, worst |tr|-2 margin {:.3e}, boundary sup error {:.3e})",
        truth.leaves.len(),
        truth.strata.len(),
        if report.pass { "pass" } else { "FAIL" },
        report.records.len(),
        report.worst_trace_margin,
        report.boundary_sup_error.unwrap_or(f64::NAN),
    );
    println!("wrote {} and {}", out.display(), truth_path.display());
    Ok(())
}

fn cmd_extract(
    input: &Path,
    out: &Path,
    side: SideArg,
    samples: usize,
    leaf_t: f64,
    seed: u64,
    dump_hull: Option<PathBuf>,
) -> Result<(), u8> {
    if samples < 4 {
        eprintln!("error: --samples must be at least 4");
        return Err(EXIT_BAD_INPUT);
    }
    if !(0.0..=1.0).contains(&leaf_t) {
        eprintln!("error: --leaf-t must lie in [0, 1]");
        return Err(EXIT_BAD_INPUT);
    }
    let f = load_map(input)?;
    if let Some(m) = f.as_global() {
        let [a, b, c, d] = m.entries();
        eprintln!(
            "the map is a single Möbius class: its hull is the flat plane dual to the inverse"
        );
        eprintln!("isometry [[{a:.17e}, {b:.17e}], [{c:.17e}, {d:.17e}]]");
        return Err(EXIT_FLAT);
    }
    let hc = HullComplex::build(&f, samples, phase_from_seed(seed)).map_err(|e| match e {
        HullError::DegenerateFlat => {
            eprintln!("flat hull: the map is a single Möbius class");
            EXIT_FLAT
        }
        other => {
            eprintln!("error: hull construction failed: {other}");
            EXIT_BAD_INPUT
        }
    })?;
    if let Some(path) = dump_hull {
        write_file(&path, &hc.to_off())?;
    }
    let hull_side = match side {
        SideArg::Left => HullSide::Past,
        SideArg::Right => HullSide::Future,
    };
    let ps = hc.extract_pleated(hull_side, Some(&f)).map_err(|e| {
        eprintln!("error: pleated extraction failed: {e}");
        EXIT_BAD_INPUT
    })?;
    let eq = strata_map(&ps, leaf_t).map_err(|e| {
        eprintln!("error: earthquake assembly failed: {e}");
        EXIT_BAD_INPUT
    })?;
    let mut report = verify_earthquake(&eq);
    report.boundary_sup_error = Some(boundary_agreement(&eq, &f, 1000));
    let json = to_json_string(&EarthquakeFile::from_earthquake(&eq)).map_err(|_| EXIT_BAD_INPUT)?;
    write_file(out, &json)?;
    println!(
        "extracted {:?} earthquake: {} faces, {} ridges, {} hull vertices",
        eq.side,
        ps.faces.len(),
        ps.ridges.len(),
        hc.vertices.len(),
    );
    println!(
        "diagnostics: verifier {} ({} pairs), worst |tr|-2 margin {:.3e}, worst separation margin {:.3e}, boundary sup error {:.3e}",
        if report.pass { "pass" } else { "FAIL" },
        report.records.len(),
        report.worst_trace_margin,
        report.worst_separation_margin,
        report.boundary_sup_error.unwrap_or(f64::NAN),
    );
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_verify(input: &Path, map: Option<PathBuf>, report_path: Option<PathBuf>) -> Result<(), u8> {
    let text = read_file(input)?;
    let file: EarthquakeFile = from_json_str(&text).map_err(|e| {
        eprintln!("error: malformed earthquake {}: {e}", input.display());
        EXIT_BAD_INPUT
    })?;
    let eq = file.to_earthquake().map_err(|e| {
        eprintln!("error: invalid earthquake {}: {e}", input.display());
        EXIT_BAD_INPUT
    })?;
    let mut report = verify_earthquake(&eq);
    if let Some(map_path) = map {
        let f = load_map(&map_path)?;
        report.boundary_sup_error = Some(boundary_agreement(&eq, &f, 1000));
    }
    let file = ReportFile::from_report(&report);
    println!(
        "verify: {} ({} stratum pairs, worst |tr|-2 margin {:.3e}, worst separation margin {:.3e})",
        if file.pass { "pass" } else { "FAIL" },
        file.pairs_checked,
        file.worst_trace_margin,
        file.worst_separation_margin,
    );
    if let Some(err) = file.boundary_sup_error {
        println!("boundary sup error vs map: {err:.3e}");
    }
    for failure in &file.failures {
        println!("failure: {failure}");
    }
    if let Some(path) = report_path {
        let json = to_json_string(&file).map_err(|_| EXIT_BAD_INPUT)?;
        write_file(&path, &json)?;
    }
    if file.pass {
        Ok(())
    } else {
        Err(EXIT_VERIFY_FAIL)
    }
}

fn cmd_render(input: &Path, out: &Path, overlay: bool) -> Result<(), u8> {
    let text = read_file(input)?;
    let any: AnyInput = from_json_str(&text).map_err(|e| {
        eprintln!("error: {} is neither an earthquake nor a circle map: {e}", input.display());
        EXIT_BAD_INPUT
    })?;
    let svg = match any {
        AnyInput::Earthquake(file) => {
            let eq = file.to_earthquake().map_err(|e| {
                eprintln!("error: invalid earthquake {}: {e}", input.display());
                EXIT_BAD_INPUT
            })?;
            adsquake::render::render_earthquake(&eq, overlay)
        }
        AnyInput::CircleMap(file) => {
            let f = file.to_map().map_err(|e| {
                eprintln!("error: invalid circle map {}: {e}", input.display());
                EXIT_BAD_INPUT
            })?;
            adsquake::render::render_circle_map(&f)
        }
    };
    write_file(out, &svg)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synthesize { input, out, truth_out } => cmd_synthesize(&input, &out, truth_out),
        Command::Extract { input, out, side, samples, leaf_t, seed, dump_hull } => {
            cmd_extract(&input, &out, side, samples, leaf_t, seed, dump_hull)
        }
        Command::Verify { input, map, report } => cmd_verify(&input, map, report),
        Command::Render { input, out, overlay } => cmd_render(&input, &out, overlay),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
