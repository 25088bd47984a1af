mod common;

use std::process::Command;

use common::data;

fn stable_image(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_stable-image"))
        .args(args)
        .env_remove("STABLE_IMAGE_SEED")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn image_test_golden() {
    let (code, out) = stable_image(&["image-test", "--point", "0,0", &path("omits_origin.map")]);
    assert_eq!((code, out.as_str()), (0, "FACT point (0,0) NOT in image\n"));
    let (code, out) = stable_image(&["image-test", "--point", "-2,-1", "--point", "1,-1", &path("omits_origin.map")]);
    assert_eq!(code, 0);
    assert_eq!(out, "FACT point (-2,-1) in image\nFACT point (1,-1) in image\n");
}

#[test]
fn classify_golden() {
    let (code, out) = stable_image(&["classify", &path("auto.map")]);
    assert_eq!((code, out.as_str()), (0, "FACT jacobian constant 1; JacobianPair\n"));
    let (code, out) = stable_image(&["classify", &path("omits_origin.map")]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "FACT jacobian x^2*y^4 + 2*x*y^3 + 2*x*y^2 - 2*x*y + y^2 + 2*y - 1; NonConstantJacobian\n"
    );
}

#[test]
fn jacobian_golden() {
    let (code, out) = stable_image(&["jacobian", &path("square.map")]);
    assert_eq!((code, out.as_str()), (0, "FACT jacobian 2*x\n"));
}

#[test]
fn fiber_golden() {
    let (code, out) = stable_image(&["fiber", "--point", "1,-1", "--n", "1", &path("omits_origin.map")]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "FACT fiber (1,-1) finite count 2\n\
         FACT fiber (1,-1) rational solution (1,-1)\n\
         FACT fiber (1,-1) rational solution (3,0)\n\
         NOTE fiber (1,-1) rational enumeration complete\n\
         FACT point (1,-1) NOT in A(f,1)\n"
    );
}

#[test]
fn coimage_golden() {
    let (code, out) = stable_image(&["coimage", &path("omits_origin.map")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"FACT coimage point (0,0)"), "{out}");
    assert_eq!(lines.iter().filter(|l| l.starts_with("FACT coimage point")).count(), 1);
    assert_eq!(lines.last(), Some(&"FACT candidates exhausted"));
}

#[test]
fn stabilize_golden() {
    let (code, out) = stable_image(&["stabilize", "--k-max", "3", &path("omits_origin.map")]);
    assert_eq!(code, 0);
    assert!(out.contains("FACT level 1 omitted (0,0)\n"), "{out}");
    assert!(out.contains("FACT level 3 omitted (0,0)\n"), "{out}");
    assert!(out.contains("FACT stabilizes K=1\n"), "{out}");
    assert!(!out.contains("INDET"));
}

#[test]
fn witness_golden() {
    let (code, out) = stable_image(&["witness", "--point", "1,-1", &path("omits_origin.map")]);
    assert_eq!((code, out.as_str()), (0, "FACT witness (1,-1) (3,0) -> (1,-1)\n"));
    let (code, out) = stable_image(&["witness", "--point", "3,4", &path("auto.map")]);
    assert_eq!(code, 0);
    assert!(out.starts_with("NOTE no rational witness among 1 targets"));
}

#[test]
fn dyn_golden() {
    let (code, out) = stable_image(&["dyn-witness", &path("merge.spec")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("FACT e=ray:0:0 M=2"));
    let (code, out) = stable_image(&["dyn-stability", &path("two_core.spec")]);
    assert_eq!((code, out.as_str()), (0, "FACT stable K=1 E^K={core:c1}\n"));
    let (code, out) = stable_image(&["dyn-stability", &path("merge.spec")]);
    assert_eq!((code, out.as_str()), (0, "FACT not stable e=ray:0:0\n"));
    let (code, out) = stable_image(&["dyn-oracle", "--k-max", "2", &path("merge.spec")]);
    assert_eq!(code, 0);
    assert_eq!(
        out,
        "FACT k=1 E^k={ray:0:0 ray:1:0 ray:1:1} oracle agrees\n\
         FACT k=2 E^k={ray:0:0 ray:0:1 ray:1:0 ray:1:1 ray:1:2} oracle agrees\n"
    );
    let (code, out) = stable_image(&["dyn-witness", &path("two_core.spec")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("ERR "));
}

#[test]
fn errors_and_exit_codes() {
    let (code, out) = stable_image(&["classify", "/no/such/file.map"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("ERR "));
    let (code, _) = stable_image(&["image-test", &path("omits_origin.map")]);
    assert_eq!(code, 1);
    let (code, out) = stable_image(&["--degree-cap", "3", "image-test", "--point", "0,0", &path("omits_origin.map")]);
    assert_eq!(code, 3);
    assert!(out.starts_with("ERR "));
}

#[test]
fn deterministic_bytes() {
    let args = ["fiber", "--seed", "99", "--point", "5,3", "--point", "1/2,-3", &path("omits_origin.map")];
    assert_eq!(stable_image(&args), stable_image(&args));
    let with_env = Command::new(env!("CARGO_BIN_EXE_stable-image"))
        .args(args)
        .env("STABLE_IMAGE_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(with_env.stdout).unwrap(), stable_image(&args).1);
}

#[test]
fn tsv_output() {
    let (code, out) = stable_image(&["--tsv", "image-test", "--point", "0,0", &path("omits_origin.map")]);
    assert_eq!((code, out.as_str()), (0, "FACT\tpoint\t(0,0)\tNOT\tin\timage\n"));
}
