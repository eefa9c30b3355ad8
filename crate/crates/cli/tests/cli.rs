use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn snpcut(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snpcut"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 80 individuals, 40 SNPs on two chromosomes; the phenotype is the sum of
/// SNPs 3..=5 plus small noise.
fn write_inputs(dir: &Path) {
    let (m, n) = (80, 40);
    let mut s = 7u64;
    let g: Vec<Vec<u8>> = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| [0, 1, 1, 2][(splitmix(&mut s) % 4) as usize])
                .collect()
        })
        .collect();
    let mut geno = String::from("iid");
    for j in 0..n {
        geno.push_str(&format!("\ts{j:02}"));
    }
    geno.push('\n');
    let mut pheno = String::new();
    for (i, row) in g.iter().enumerate() {
        geno.push_str(&format!("i{i:03}"));
        for v in row {
            geno.push_str(&format!("\t{v}"));
        }
        geno.push('\n');
        let noise = (splitmix(&mut s) % 1000) as f64 / 2000.0 - 0.25;
        let y = f64::from(row[3] + row[4] + row[5]) + noise;
        pheno.push_str(&format!("i{i:03}\t{y}\n"));
    }
    let map: String = (0..n)
        .map(|j| format!("s{j:02}\t{}\t{}\n", 1 + j / 20, 1000 * (j % 20 + 1)))
        .collect();
    fs::write(dir.join("g.tsv"), geno).unwrap();
    fs::write(dir.join("y.tsv"), pheno).unwrap();
    fs::write(dir.join("map.tsv"), map).unwrap();
    fs::write(
        dir.join("genes.tsv"),
        "A\t1\t3000\t6000\nB\t2\t1000\t4000\n",
    )
    .unwrap();
    fs::write(dir.join("ix.tsv"), "A\tB\n").unwrap();
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    write_inputs(dir.path());
    dir
}

fn read(dir: &Path, out: &str, file: &str) -> String {
    fs::read_to_string(dir.join(out).join(file)).unwrap()
}

fn json(dir: &Path, out: &str, file: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, out, file)).unwrap()
}

#[test]
fn gi_without_interactions_is_a_usage_error() {
    let d = setup();
    let out = snpcut(
        &[
            "build-network",
            "--network",
            "gi",
            "--map",
            "map.tsv",
            "--genes",
            "genes.tsv",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--interactions"));
}

#[test]
fn build_network_writes_edge_list_and_manifest() {
    let d = setup();
    let out = snpcut(
        &[
            "build-network",
            "--network",
            "gi",
            "--map",
            "map.tsv",
            "--genes",
            "genes.tsv",
            "--interactions",
            "ix.tsv",
            "--window",
            "0",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let net = read(d.path(), "o", "network.tsv");
    assert!(net.starts_with("snp_id_a\tsnp_id_b\tweight\n"));
    // A spans s02..s05 (4 SNPs), B spans s20..s23 (4 SNPs): 38 sequence edges,
    // 3 extra clique pairs per gene, 16 bipartite links.
    assert_eq!(net.lines().count() - 1, 38 + 3 + 3 + 16);
    let manifest = json(d.path(), "o", "manifest.json");
    assert_eq!(manifest["subcommand"], "build-network");
    assert_eq!(manifest["inputs"].as_object().unwrap().len(), 3);
}

#[test]
fn negative_lambda_is_rejected() {
    let d = setup();
    let out = snpcut(
        &[
            "select",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--map",
            "map.tsv",
            "--lambda",
            "-1",
            "--eta",
            "1",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 2);
    assert!(!d.path().join("o").exists());
}

#[test]
fn three_node_path_selects_everything() {
    let d = setup();
    fs::write(d.path().join("c.tsv"), "snp_id\tc\na\t3\nb\t0\nc\t3\n").unwrap();
    fs::write(d.path().join("net.tsv"), "a\tb\t1\nb\tc\t1\n").unwrap();
    for solver in ["bk", "dinic"] {
        let o = format!("o_{solver}");
        let out = snpcut(
            &[
                "select",
                "--scores",
                "c.tsv",
                "--network-file",
                "net.tsv",
                "--lambda",
                "1",
                "--eta",
                "1",
                "--solver",
                solver,
                "--out-dir",
                &o,
            ],
            d.path(),
        );
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(read(d.path(), &o, "selected.tsv"), "snp_id\na\nb\nc\n");
        let report = json(d.path(), &o, "selection.json");
        assert_eq!(report["objective"], 3.0);
        assert_eq!(report["cut_value"], 1.0);
        assert_eq!(report["n_selected"], 3);
    }
}

#[test]
fn eta_above_every_score_selects_nothing() {
    let d = setup();
    fs::write(d.path().join("c.tsv"), "a\t3\nb\t0.5\nc\t2.5\n").unwrap();
    fs::write(d.path().join("net.tsv"), "a\tb\t1\n").unwrap();
    let out = snpcut(
        &[
            "select",
            "--scores",
            "c.tsv",
            "--network-file",
            "net.tsv",
            "--lambda",
            "0",
            "--eta",
            "3.5",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 0);
    assert_eq!(read(d.path(), "o", "selected.tsv"), "snp_id\n");
    assert_eq!(json(d.path(), "o", "selection.json")["objective"], 0.0);
}

#[test]
fn infeasible_cv_exits_with_three() {
    let d = setup();
    let out = snpcut(
        &[
            "cv",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--map",
            "map.tsv",
            "--folds",
            "4",
            "--lambda-grid",
            "0",
            "--eta-grid",
            "0",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn output_directory_is_never_overwritten() {
    let d = setup();
    fs::create_dir(d.path().join("o")).unwrap();
    fs::write(d.path().join("o/keep.txt"), "x").unwrap();
    let out = snpcut(
        &[
            "baseline",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 2);
    assert_eq!(
        fs::read_to_string(d.path().join("o/keep.txt")).unwrap(),
        "x"
    );
}

fn cv_outputs(d: &Path, threads: &str) -> (String, serde_json::Value) {
    let o = format!("cv_t{threads}");
    let out = snpcut(
        &[
            "cv",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--network",
            "gm",
            "--map",
            "map.tsv",
            "--genes",
            "genes.tsv",
            "--folds",
            "5",
            "--max-selected-frac",
            "0.3",
            "--seed",
            "11",
            "--threads",
            threads,
            "--out-dir",
            &o,
        ],
        d,
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    (read(d, &o, "selected.tsv"), json(d, &o, "cv_report.json"))
}

#[test]
fn cv_is_identical_across_thread_counts() {
    let d = setup();
    let (sel1, rep1) = cv_outputs(d.path(), "1");
    let (sel8, rep8) = cv_outputs(d.path(), "8");
    assert_eq!(sel1, sel8);
    assert_eq!(rep1, rep8);
    // The stable selection is a nonempty subset of the planted SNPs.
    let ids: Vec<&str> = sel1.lines().skip(1).collect();
    assert!(!ids.is_empty());
    assert!(
        ids.iter().all(|id| ["s03", "s04", "s05"].contains(id)),
        "{ids:?}"
    );
}

#[test]
fn baseline_then_evaluate() {
    let d = setup();
    let out = snpcut(
        &[
            "baseline",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--out-dir",
            "b",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 0);
    let table = read(d.path(), "b", "baseline.tsv");
    assert!(table.starts_with("snp_id\tt_statistic\tp_value\tselected\n"));
    assert_eq!(table.lines().count(), 41);
    let sel = d.path().join("b/selected.tsv");
    let out = snpcut(
        &[
            "evaluate",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--selection",
            sel.to_str().unwrap(),
            "--folds",
            "5",
            "--out-dir",
            "e",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(d.path(), "e", "predictivity.json");
    assert!(r["predictivity"]["mean_r2"].as_f64().unwrap() > 0.8);

    fs::write(d.path().join("bad.tsv"), "nope\n").unwrap();
    let out = snpcut(
        &[
            "evaluate",
            "--genotypes",
            "g.tsv",
            "--phenotype",
            "y.tsv",
            "--selection",
            "bad.tsv",
            "--out-dir",
            "e2",
        ],
        d.path(),
    );
    assert_ne!(code(&out), 0);
}

#[test]
fn small_simulation_writes_both_tables() {
    let d = setup();
    let out = snpcut(
        &[
            "simulate",
            "--scenario",
            "a,b",
            "--repeats",
            "2",
            "--m",
            "60",
            "--n",
            "200",
            "--n-causal",
            "4",
            "--methods",
            "univariate,oracle",
            "--networks",
            "gs",
            "--out-dir",
            "s",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let tsv = read(d.path(), "s", "metrics.tsv");
    assert!(tsv.starts_with("# expected heritability"));
    let rows: Vec<&str> = tsv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 1 + 2 * 2);
    assert!(rows.iter().any(|r| r.starts_with("a\toracle\tNA\t2\t1\t")));
    let report = json(d.path(), "s", "metrics.json");
    assert_eq!(report["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn missing_input_file_is_reported() {
    let d = setup();
    let out = snpcut(
        &[
            "baseline",
            "--genotypes",
            "absent.tsv",
            "--phenotype",
            "y.tsv",
            "--out-dir",
            "o",
        ],
        d.path(),
    );
    assert_eq!(code(&out), 2);
}
