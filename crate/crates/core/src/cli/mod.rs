//! The `stable-image` command line. [`run`] does all the work and returns the
//! exit status with the report text, so it can be driven without a process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::algebra::{Point, PolyMap, DEFAULT_DEGREE_CAP};
use crate::fibers::{a_membership, in_image, solve_fiber, FiberConfig, FiberError, FiberStatus, Membership};
use crate::imagedyn::{
    classify, coimage_candidates, injectivity_witness_search, probe_grid, stabilization_report, ImageError, MapKind,
    AUTO_PROBE_HEIGHT, DEFAULT_K_MAX,
};
use crate::parser::{parse_dyn_spec, parse_map, parse_point_str, print_poly, SourceText};
use crate::setdyn::{truncation_oracle, CofiniteSelfMap, DynError, Node, Stability};

pub const SEED_ENV: &str = "STABLE_IMAGE_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "stable-image", version, about = "Exact image, fiber and stabilization analysis for plane polynomial maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Emit tab-separated fields instead of space-separated report lines.
    #[arg(long, global = true)]
    pub tsv: bool,
    /// Seed for shear selection; overridden by STABLE_IMAGE_SEED.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: u32,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    /// Target point `a,b`, repeatable.
    #[arg(long = "point", allow_hyphen_values = true, value_parser = point_arg)]
    pub points: Vec<Point>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the Jacobian determinant.
    Jacobian { file: PathBuf },
    /// Classify the Jacobian: pair, nonconstant or degenerate.
    Classify { file: PathBuf },
    /// Solve fibers over the given points.
    Fiber {
        file: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        /// Also decide membership in A(f, n).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Decide image membership of the given points.
    ImageTest {
        file: PathBuf,
        #[command(flatten)]
        points: PointArgs,
    },
    /// Search for rational coimage points.
    Coimage { file: PathBuf },
    /// Per-level omitted sets of the iterates.
    Stabilize {
        file: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
    },
    /// Look for two rational points with the same image.
    Witness {
        file: PathBuf,
        #[command(flatten)]
        points: PointArgs,
        /// Add every target of height at most 5.
        #[arg(long)]
        auto_probe: bool,
    },
    /// Decide stability of a dynamics spec.
    DynStability { file: PathBuf },
    /// Unstable witness `e` with its least threshold `M`.
    DynWitness { file: PathBuf },
    /// Cross-check coimage sets against the truncation oracle.
    DynOracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        /// Truncation length; defaults to a safe value for the spec.
        #[arg(long)]
        n_max: Option<u64>,
    },
}

fn point_arg(s: &str) -> Result<Point, String> {
    parse_point_str(s).map_err(|e| e.kind.to_string())
}

/// Exit status plus report text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<FiberError> for Failure {
    fn from(e: FiberError) -> Self {
        Failure { code: if e.is_cap() { EXIT_CAP } else { EXIT_INPUT }, message: e.to_string() }
    }
}

impl From<ImageError> for Failure {
    fn from(e: ImageError) -> Self {
        Failure { code: if e.is_cap() { EXIT_CAP } else { EXIT_INPUT }, message: e.to_string() }
    }
}

impl From<DynError> for Failure {
    fn from(e: DynError) -> Self {
        let code = if matches!(e, DynError::Unresolved { .. }) { EXIT_CAP } else { EXIT_INPUT };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<SourceText, Failure> {
    std::fs::read_to_string(path)
        .map(|t| SourceText::new(t, path.display().to_string()))
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_map(path: &Path) -> Result<PolyMap, Failure> {
    parse_map(&read(path)?).map_err(|e| Failure::input(e.to_string()))
}

fn load_spec(path: &Path) -> Result<CofiniteSelfMap, Failure> {
    parse_dyn_spec(&read(path)?).map_err(|e| Failure::input(e.to_string()))
}

fn need_points(points: &PointArgs) -> Result<&[Point], Failure> {
    if points.points.is_empty() {
        return Err(Failure::input("at least one --point is required"));
    }
    Ok(&points.points)
}

fn set_text(nodes: impl IntoIterator<Item = impl ToString>) -> String {
    let items: Vec<String> = nodes.into_iter().map(|n| n.to_string()).collect();
    format!("{{{}}}", items.join(" "))
}

fn dispatch(cli: &Cli, cfg: &FiberConfig, out: &mut Vec<String>) -> Result<(), Failure> {
    match &cli.command {
        Command::Jacobian { file } => {
            let f = load_map(file)?;
            out.push(format!("FACT jacobian {}", print_poly(&f.jacobian_det())));
        }
        Command::Classify { file } => {
            let c = classify(&load_map(file)?);
            let line = match c.kind {
                MapKind::JacobianPair => format!("FACT jacobian constant {}; JacobianPair", print_poly(&c.jacobian)),
                MapKind::NonConstantJacobian => format!("FACT jacobian {}; NonConstantJacobian", print_poly(&c.jacobian)),
                MapKind::DegenerateJacobian => "FACT jacobian 0; DegenerateJacobian".to_string(),
            };
            out.push(line);
        }
        Command::Fiber { file, points, n } => {
            let f = load_map(file)?;
            for t in need_points(points)? {
                let r = solve_fiber(&f, t, cfg)?;
                match (r.status, r.distinct_count) {
                    (FiberStatus::Empty, _) => out.push(format!("FACT fiber {t} empty")),
                    (FiberStatus::Infinite, _) => out.push(format!("FACT fiber {t} infinite")),
                    (FiberStatus::Finite, Some(c)) if r.certified => out.push(format!("FACT fiber {t} finite count {c}")),
                    (FiberStatus::Finite, c) => {
                        out.push(format!("FACT fiber {t} finite"));
                        out.push(format!("INDET fiber {t} count at least {}", c.unwrap_or(0)));
                    }
                }
                for s in &r.rational_solutions {
                    out.push(format!("FACT fiber {t} rational solution {s}"));
                }
                if r.status == FiberStatus::Finite {
                    let what = if r.rational_complete { "complete" } else { "partial" };
                    out.push(format!("NOTE fiber {t} rational enumeration {what}"));
                }
                if let Some(n) = n {
                    let m = a_membership(&f, t, *n, cfg)?;
                    out.push(match m.member {
                        Membership::Yes => format!("FACT point {t} in A(f,{n})"),
                        Membership::No => format!("FACT point {t} NOT in A(f,{n})"),
                        Membership::Indeterminate => format!("INDET point {t} A(f,{n}) membership undecided"),
                    });
                }
            }
        }
        Command::ImageTest { file, points } => {
            let f = load_map(file)?;
            for t in need_points(points)? {
                let yes = in_image(&f, t, cfg)?;
                out.push(format!("FACT point {t} {}in image", if yes { "" } else { "NOT " }));
            }
        }
        Command::Coimage { file } => {
            let s = coimage_candidates(&load_map(file)?, cfg)?;
            for c in &s.candidates {
                if s.coimage.contains(c) {
                    out.push(format!("FACT coimage point {c}"));
                } else {
                    out.push(format!("FACT candidate {c} in image"));
                }
            }
            out.extend(s.notes.iter().map(|n| format!("NOTE {n}")));
            out.push(if s.exhausted { "FACT candidates exhausted".into() } else { "NOTE search truncated".into() });
        }
        Command::Stabilize { file, points, k_max } => {
            let f = load_map(file)?;
            let search = coimage_candidates(&f, cfg)?;
            let mut cands = search.coimage.clone();
            cands.extend(points.points.iter().cloned());
            let mut r = stabilization_report(&f, &cands, *k_max, cfg)?;
            r.candidates_complete = search.exhausted;
            if !search.exhausted {
                out.push("NOTE coimage search truncated; levels past the first assume the candidates cover it".into());
            }
            out.extend(r.to_lines());
        }
        Command::Witness { file, points, auto_probe } => {
            let f = load_map(file)?;
            let mut targets = points.points.clone();
            if *auto_probe {
                targets.extend(probe_grid(AUTO_PROBE_HEIGHT));
            }
            if targets.is_empty() {
                return Err(Failure::input("give --point targets or --auto-probe"));
            }
            let s = injectivity_witness_search(&f, &targets, cfg)?;
            match s.witness {
                Some(w) => out.push(format!("FACT witness {} {} -> {}", w.first, w.second, w.common_image)),
                None => out.push(format!(
                    "NOTE no rational witness among {} targets; injectivity not decided",
                    s.probed
                )),
            }
        }
        Command::DynStability { file } => {
            let spec = load_spec(file)?;
            match spec.is_stable() {
                Stability::Stable { k, e_k } => out.push(format!("FACT stable K={k} E^K={}", set_text(&e_k))),
                Stability::NotStable { e } => out.push(format!("FACT not stable e={e}")),
            }
        }
        Command::DynWitness { file } => {
            let w = load_spec(file)?.lemma1_witness()?;
            out.push(format!("FACT e={} M={}", w.e, w.m));
            out.push(format!("NOTE orbit verified through k={}", w.orbit_prefix.len() - 1));
        }
        Command::DynOracle { file, k_max, n_max } => {
            let spec = load_spec(file)?;
            let k_max = *k_max as u64;
            if k_max == 0 {
                return Err(DynError::ZeroK.into());
            }
            let n_max = n_max.unwrap_or_else(|| spec.max_override_coordinate().unwrap_or(0) + 2 * k_max + 16);
            let oracle = truncation_oracle(&spec, k_max, n_max)?;
            let window = n_max - k_max;
            for (i, approx) in oracle.iter().enumerate() {
                let k = i as u64 + 1;
                let exact: Vec<Node> = spec
                    .e_set(k)?
                    .into_iter()
                    .filter(|n| !matches!(n, Node::Ray { position, .. } if *position >= window))
                    .collect();
                let agree = exact.iter().eq(approx.iter());
                let tag = if agree { "FACT" } else { "ERR" };
                out.push(format!("{tag} k={k} E^k={} oracle {}", set_text(approx), if agree { "agrees" } else { "disagrees" }));
            }
        }
    }
    Ok(())
}

fn exit_code(lines: &[String]) -> i32 {
    let has = |tag: &str| lines.iter().any(|l| l.starts_with(tag));
    if has("ERR") {
        EXIT_INPUT
    } else if has("INDET") && !has("FACT") {
        EXIT_INDETERMINATE
    } else {
        EXIT_OK
    }
}

fn render(lines: &[String], tsv: bool) -> String {
    let mut s = String::new();
    for l in lines {
        if tsv {
            let _ = writeln!(s, "{}", l.split(' ').collect::<Vec<_>>().join("\t"));
        } else {
            let _ = writeln!(s, "{l}");
        }
    }
    s
}

/// Parses `args` (program name first) and runs the command. `env_seed`, when
/// set, replaces `--seed`.
pub fn run<I, T>(args: I, env_seed: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            return Outcome { code, output: e.to_string() };
        }
    };
    let seed = match env_seed.map(str::parse::<u64>) {
        None => cli.seed,
        Some(Ok(s)) => s,
        Some(Err(_)) => {
            let lines = vec![format!("ERR {SEED_ENV} must be an unsigned integer")];
            return Outcome { code: EXIT_INPUT, output: render(&lines, cli.tsv) };
        }
    };
    let cfg = FiberConfig { degree_cap: cli.degree_cap, seed, ..FiberConfig::default() };
    let mut lines = Vec::new();
    let code = match dispatch(&cli, &cfg, &mut lines) {
        Ok(()) => exit_code(&lines),
        Err(f) => {
            lines.push(format!("ERR {}", f.message));
            f.code
        }
    };
    Outcome { code, output: render(&lines, cli.tsv) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp(name: &str, body: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("stable-image-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join(name);
        std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
        p
    }

    fn go(args: &[&str]) -> Outcome {
        let mut v = vec!["stable-image"];
        v.extend_from_slice(args);
        run(v, None)
    }

    #[test]
    fn image_test_origin() {
        let p = temp("ex.map", "f(x,y) = (x - 2*(x*y+1) - y*(x*y+1)^2, -1 - y*(x*y+1))\n");
        let o = go(&["image-test", "--point", "0,0", p.to_str().unwrap()]);
        assert_eq!(o, Outcome { code: 0, output: "FACT point (0,0) NOT in image\n".into() });
        let o = go(&["image-test", "--point", "-2,1/2", "--tsv", p.to_str().unwrap()]);
        assert_eq!(o.output, "FACT\tpoint\t(-2,1/2)\tin\timage\n");
    }

    #[test]
    fn classify_auto() {
        let p = temp("auto.map", "f(x,y) = (x, y + x^2)\n");
        let o = go(&["classify", p.to_str().unwrap()]);
        assert_eq!(o, Outcome { code: 0, output: "FACT jacobian constant 1; JacobianPair\n".into() });
    }

    #[test]
    fn dyn_witness_merge() {
        let p = temp("merge.spec", "rays: 2\nmap: ray:1:0 -> ray:0:1\n");
        let o = go(&["dyn-witness", p.to_str().unwrap()]);
        assert_eq!(o.code, 0);
        assert_eq!(o.output.lines().next(), Some("FACT e=ray:0:0 M=2"));
    }

    #[test]
    fn input_errors() {
        let p = temp("bad.map", "f(x,y) = (x)\n");
        let o = go(&["classify", p.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_INPUT);
        assert!(o.output.starts_with("ERR "), "{}", o.output);
        let o = go(&["classify", "/nonexistent/file.map"]);
        assert_eq!(o.code, EXIT_INPUT);
        let o = go(&["frobnicate"]);
        assert_eq!(o.code, EXIT_INPUT);
        let good = temp("ok.map", "f(x,y) = (x, y)\n");
        assert_eq!(go(&["image-test", good.to_str().unwrap()]).code, EXIT_INPUT);
        assert_eq!(go(&["image-test", "--point", "1,", good.to_str().unwrap()]).code, EXIT_INPUT);
    }

    #[test]
    fn cap_exhaustion() {
        let p = temp("big.map", "f(x,y) = (x^9 + y, y)\n");
        let o = go(&["--degree-cap", "4", "image-test", "--point", "0,0", p.to_str().unwrap()]);
        assert_eq!(o.code, EXIT_CAP);
    }

    #[test]
    fn exit_code_rules() {
        let l = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(exit_code(&l(&["FACT a", "INDET b"])), EXIT_OK);
        assert_eq!(exit_code(&l(&["INDET b", "NOTE c"])), EXIT_INDETERMINATE);
        assert_eq!(exit_code(&l(&["FACT a", "ERR b"])), EXIT_INPUT);
        assert_eq!(exit_code(&l(&["NOTE c"])), EXIT_OK);
    }

    #[test]
    fn env_seed_overrides() {
        let p = temp("sq.map", "f(x,y) = (x^2, y)\n");
        let args = ["stable-image", "fiber", "--point", "4,0", p.to_str().unwrap()];
        let a = run(args, Some("17"));
        let b = run(args, Some("17"));
        assert_eq!(a, b);
        assert_eq!(run(args, Some("x")).code, EXIT_INPUT);
    }
}
