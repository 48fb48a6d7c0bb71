//! The golden corpus: instance files under `tests/golden` and the command
//! lines run against them.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use sigma_cat_cli::format::{parse_instance, serialize_instance};

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn golden(name: &str) -> PathBuf {
    golden_dir().join(name)
}

pub fn sigmacat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sigmacat"))
        .args(args)
        .output()
        .expect("run sigmacat")
}

pub struct Case {
    pub args: &'static [&'static str],
    pub exit: i32,
    /// Golden file stdout must equal byte for byte.
    pub stdout: Option<&'static str>,
    /// Text stdout must contain.
    pub contains: Option<&'static str>,
}

const fn case(args: &'static [&'static str], exit: i32) -> Case {
    Case { args, exit, stdout: None, contains: None }
}

/// Arguments ending in `.json` name files in the golden directory.
pub fn corpus() -> Vec<Case> {
    vec![
        case(&["validate", "arrow.json"], 0),
        case(&["validate", "monoid.json"], 0),
        case(&["validate", "p_over_arrow.json"], 0),
        case(&["validate", "constant_arrow.json"], 0),
        case(&["validate", "bi_presheaf.json"], 0),
        case(&["validate", "p_cat.json"], 0),
        case(&["validate", "q_over_p.json"], 0),
        Case {
            contains: Some("Associativity at [x, y, x]"),
            ..case(&["validate", "monoid_broken_assoc.json"], 1)
        },
        Case {
            contains: Some("PresheafIdentity at [b]"),
            ..case(&["validate", "bad_identity_action.json"], 1)
        },
        case(&["validate", "malformed.json"], 2),
        case(&["validate", "unknown_kind.json"], 2),
        case(&["validate", "missing.json"], 2),
        Case {
            stdout: Some("expected_elements_p_over_arrow.json"),
            ..case(&["construct", "elements", "p_over_arrow.json"], 0)
        },
        Case {
            stdout: Some("expected_functor_cat_arrow_arrow.json"),
            ..case(&["construct", "functor-cat", "arrow.json", "arrow.json"], 0)
        },
        Case {
            stdout: Some("expected_grothendieck_constant_arrow.json"),
            ..case(&["construct", "grothendieck", "constant_arrow.json"], 0)
        },
        case(&["construct", "functor-cat", "discrete5.json", "discrete5.json"], 3),
        case(&["construct", "functor-cat", "arrow.json", "arrow.json", "--bound", "1"], 3),
        case(&["construct", "elements", "arrow.json"], 2),
        case(&["construct", "sigma-pq", "p_cat.json", "q_over_p.json"], 0),
        case(&["check", "ac", "bi_presheaf.json"], 0),
        case(&["check", "commute", "bi_presheaf.json"], 0),
        case(&["check", "assoc", "p_cat.json", "q_over_p.json"], 0),
        case(&["check", "assoc", "p_cat.json", "q_over_arrow.json"], 2),
        case(&["check", "disc-fib", "p_over_arrow.json"], 0),
        case(&["check", "disc-fib", "constant_arrow.json"], 1),
        case(&["check", "split-fib", "constant_arrow.json"], 0),
        case(&["check", "ac", "bad_identity_action.json"], 2),
        case(&["check", "ac", "malformed.json"], 2),
    ]
}

pub fn resolve(args: &[&str]) -> Vec<String> {
    args.iter()
        .map(|a| {
            if a.ends_with(".json") {
                golden(a).display().to_string()
            } else {
                a.to_string()
            }
        })
        .collect()
}

/// Runs one corpus case; the error describes the first mismatch.
pub fn run_case(c: &Case) -> Result<(), String> {
    let args = resolve(c.args);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = sigmacat(&args);
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    if code != c.exit {
        return Err(format!(
            "{:?}: exit {code}, expected {}\n{stdout}{}",
            c.args,
            c.exit,
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    if let Some(name) = c.stdout {
        let want = fs::read(golden(name)).map_err(|e| e.to_string())?;
        if out.stdout != want {
            return Err(format!("{:?}: stdout differs from {name}", c.args));
        }
    }
    if let Some(needle) = c.contains {
        if !stdout.contains(needle) {
            return Err(format!("{:?}: stdout lacks {needle:?}\n{stdout}", c.args));
        }
    }
    Ok(())
}

/// Every golden file that parses, with its text.
pub fn parseable_goldens() -> Vec<(String, String)> {
    let mut files: Vec<_> = fs::read_dir(golden_dir())
        .expect("golden dir")
        .map(|e| e.expect("entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
        .into_iter()
        .filter_map(|p| {
            let text = fs::read_to_string(&p).expect("read golden");
            parse_instance(&text).ok()?;
            Some((p.file_name().unwrap().to_string_lossy().into_owned(), text))
        })
        .collect()
}

/// `serialize(parse(text)) == text` for one golden file.
pub fn round_trip(name: &str, text: &str) -> Result<(), String> {
    let instance = parse_instance(text).map_err(|e| format!("{name}: {e}"))?;
    let again = serialize_instance(&instance);
    if again != text {
        return Err(format!("{name}: round trip is not byte-identical"));
    }
    if parse_instance(&again).map_err(|e| e.to_string())? != instance {
        return Err(format!("{name}: reparse differs"));
    }
    Ok(())
}
