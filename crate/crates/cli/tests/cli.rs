use std::path::Path;
use std::process::{Command, Output};

use hyperarea_cli::docs::{parse, to_text, ColorDoc, ComponentDoc, HyperlinkDoc, LoopDoc, SurfaceDoc};
use hyperarea_cli::report::{read_csv, AreaOut, ConvergenceCsvRow, CrossingRow, PiercingRow, ValidationOut};
use hyperarea_core::fixtures;
use proptest::prelude::*;
use tempfile::TempDir;

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperarea"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn examples() -> TempDir {
    let dir = TempDir::new().unwrap();
    for name in fixtures::NAMES {
        let o = bin(&["example", name, "--dir", name], dir.path());
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
    dir
}

#[test]
fn bundled_documents_round_trip() {
    for name in fixtures::NAMES {
        let ex = fixtures::by_name(name).unwrap();
        if let Some(h) = &ex.hyperlink {
            let doc = HyperlinkDoc::from_hyperlink(h);
            let back: HyperlinkDoc = parse(&to_text(&doc), name).unwrap();
            assert_eq!(&back.to_hyperlink().unwrap(), h);
        }
        if let Some(m) = &ex.matter {
            let doc = HyperlinkDoc::from_colored(m);
            let back: HyperlinkDoc = parse(&to_text(&doc), name).unwrap();
            assert_eq!(&back.to_colored().unwrap(), m);
        }
        if let Some(s) = &ex.surface {
            let doc = SurfaceDoc::from_surface(s);
            let back: SurfaceDoc = parse(&to_text(&doc), name).unwrap();
            assert_eq!(&back.to_surface().unwrap(), s);
        }
    }
}

fn arb_loop_doc() -> impl Strategy<Value = LoopDoc> {
    (
        prop::option::of("[a-z]{1,6}"),
        prop::collection::vec(prop::array::uniform4(-1e6f64..1e6), 3..10),
    )
        .prop_map(|(name, vertices)| LoopDoc { name, vertices })
}

fn arb_ring() -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec(prop::array::uniform2(any::<f64>().prop_filter("finite", |x| x.is_finite())), 3..8)
}

proptest! {
    #[test]
    fn hyperlink_doc_round_trip(
        loops in prop::collection::vec(arb_loop_doc(), 0..4),
        colored in any::<bool>(),
        twice in prop::collection::vec((0u32..9, 0u32..9), 4),
    ) {
        let colors = colored.then(|| {
            loops
                .iter()
                .zip(&twice)
                .map(|(_, &(a, b))| ColorDoc { jplus: a as f64 / 2.0, jminus: b as f64 / 2.0 })
                .collect()
        });
        let doc = HyperlinkDoc { loops, colors };
        let back: HyperlinkDoc = parse(&to_text(&doc), "mem").unwrap();
        prop_assert_eq!(back, doc);
    }

    #[test]
    fn surface_doc_round_trip(
        outer in arb_ring(),
        holes in prop::collection::vec(arb_ring(), 0..3),
        sign in prop::sample::select(vec![-1i8, 1]),
    ) {
        let doc = SurfaceDoc { components: vec![ComponentDoc { outer, holes }], normal_sign: sign };
        let back: SurfaceDoc = parse(&to_text(&doc), "mem").unwrap();
        prop_assert_eq!(back, doc);
    }
}

#[test]
fn validate_exit_codes() {
    let dir = examples();
    let o = bin(&["validate", "--hyperlink", "two-circles/hyperlink.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let r: ValidationOut = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(r.valid);

    // the second circle replaced by a time-shifted copy of the first
    let text = std::fs::read_to_string(dir.path().join("two-circles/hyperlink.json")).unwrap();
    let mut doc: HyperlinkDoc = parse(&text, "two-circles").unwrap();
    doc.loops[1].vertices = doc.loops[0].vertices.iter().map(|v| [v[0] + 1.0, v[1], v[2], v[3]]).collect();
    std::fs::write(dir.path().join("copy.json"), to_text(&doc)).unwrap();
    let o = bin(&["validate", "--hyperlink", "copy.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let r: ValidationOut = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!r.valid && !r.violations.is_empty());
    let o = bin(&["sk", "--hyperlink", "copy.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("spatial-coincidence"));
}

#[test]
fn malformed_documents_exit_1() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("short.json"), r#"{"loops": [{"vertices": [[0,0,0,0],[0,1,0,0]]}]}"#).unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"loops\": [\n").unwrap();
    std::fs::write(dir.path().join("extra.json"), r#"{"loops": [], "colour": []}"#).unwrap();
    for (file, needle) in [("short.json", "loops[0].vertices"), ("broken.json", "line 2"), ("extra.json", "colour")] {
        let o = bin(&["sk", "--hyperlink", file], dir.path());
        assert_eq!(o.status.code(), Some(1), "{file}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(needle), "{file}");
    }
    let o = bin(&["example", "unknown"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = bin(&["area", "--q", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn degenerate_piercing_exits_3_with_witness() {
    let dir = examples();
    let doc = HyperlinkDoc {
        loops: vec![LoopDoc {
            name: None,
            vertices: vec![[-0.5, 0.0, 0.25, 0.0], [-0.5, 1.0, 1.0, 0.0], [-0.5, 1.0, -1.0, 0.0]],
        }],
        colors: None,
    };
    std::fs::write(dir.path().join("touch.json"), to_text(&doc)).unwrap();
    let o = bin(&["lk", "--hyperlink", "touch.json", "--surface", "one-piercing/surface.json"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("[0.25, 0.0]"), "{err}");
}

#[test]
fn sk_and_lk_tables() {
    let dir = examples();
    let o = bin(&["sk", "--hyperlink", "hopf-pair/hyperlink.json"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# manifest: {"));
    assert!(text.trim_end().ends_with("# sk,0,1,-6"));
    let rows: Vec<CrossingRow> = read_csv(&text).unwrap();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows.iter().map(|r| r.product).sum::<i32>(), -6);

    let o = bin(
        &["lk", "--hyperlink", "cancelling-piercings/matter.json", "--surface", "cancelling-piercings/surface.json"],
        dir.path(),
    );
    let text = stdout(&o);
    let rows: Vec<PiercingRow> = read_csv(&text).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows.iter().map(|r| r.epsilon).sum::<i32>(), 0);
    assert!(text.trim_end().ends_with("# lk,0,0,2"));
}

#[test]
fn area_document() {
    let dir = examples();
    let o = bin(
        &["area", "--q", "1", "--matter", "one-piercing/matter.json", "--surface", "one-piercing/surface.json"],
        dir.path(),
    );
    assert!(o.status.success());
    let a: AreaOut = serde_json::from_str(&stdout(&o)).unwrap();
    let expected = (3.0 * std::f64::consts::PI).sqrt() / 2.0;
    assert!((a.value[0] - expected).abs() < 1e-12 && (a.value[1] - expected).abs() < 1e-12);
    assert_eq!(a.piercing_counts, vec![1]);
    assert_eq!(a.manifest.parameters["q"], serde_json::json!(1.0));
}

#[test]
fn verify_sk_rows() {
    let dir = examples();
    let o = bin(
        &["verify", "--target", "sk", "--kappa", "8,16,32", "--hyperlink", "hopf-pair/hyperlink.json"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<ConvergenceCsvRow> = read_csv(&stdout(&o)).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.windows(2).all(|w| w[1].rel_error < w[0].rel_error));
    let o = bin(&["verify", "--target", "sk", "--kappa", "128", "--hyperlink", "hopf-pair/hyperlink.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn deterministic_output_is_byte_identical() {
    let dir = examples();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|i| {
            let out = format!("run{i}.csv");
            let o = Command::new(env!("CARGO_BIN_EXE_hyperarea"))
                .args([
                    "verify",
                    "--target",
                    "lk",
                    "--kappa",
                    "8,16",
                    "--hyperlink",
                    "one-piercing/matter.json",
                    "--surface",
                    "one-piercing/surface.json",
                    "--deterministic",
                    "--out",
                    &out,
                ])
                .env("HYPERAREA_THREADS", if i == 0 { "1" } else { "3" })
                .current_dir(dir.path())
                .output()
                .unwrap();
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            std::fs::read(dir.path().join(out)).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    // example documents too
    let a = bin(&["example", "two-loop-colored", "--deterministic"], dir.path()).stdout;
    let b = bin(&["example", "two-loop-colored", "--deterministic"], dir.path()).stdout;
    assert_eq!(a, b);
}

#[test]
fn bad_thread_count_rejected() {
    let dir = examples();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperarea"))
        .args(["sk", "--hyperlink", "hopf-pair/hyperlink.json"])
        .env("HYPERAREA_THREADS", "zero")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}
