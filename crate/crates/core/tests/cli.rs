use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cubeseg::image_io::{decode_rgb, encode_png_rgb, encode_ppm};
use cubeseg::{Raster, Rgb8, RgbRaster};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cubeseg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn cubeseg")
}

fn write(dir: &Path, name: &str, bytes: &[u8]) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, bytes).unwrap();
    p
}

fn report(dir: &Path) -> Vec<(String, String)> {
    std::fs::read_to_string(dir.join("report.txt"))
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn value(report: &[(String, String)], key: &str) -> String {
    report
        .iter()
        .find(|(k, _)| k == key)
        .unwrap_or_else(|| panic!("missing {key}"))
        .1
        .clone()
}

fn six_colour_map() -> RgbRaster {
    let inks = [
        [235, 225, 200],
        [60, 110, 200],
        [70, 150, 70],
        [200, 50, 40],
        [25, 25, 25],
        [140, 95, 50],
    ];
    Raster::from_fn(48, 40, |x, y| {
        let base = inks[(x / 8 + y / 10) % 6];
        let wobble = ((x * 7 + y * 13) % 9) as i32 - 4;
        Rgb8::from(base.map(|v: i32| (v + wobble).clamp(0, 255) as u8))
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn missing_input_exits_2_without_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = run(&["--input", "/no/such/image.png", "--out-dir", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
    assert!(!out.exists());
}

#[test]
fn solid_image_lloyd_single_cluster() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(
        tmp.path(),
        "solid.png",
        &encode_png_rgb(&Raster::filled(8, 8, Rgb8::new(40, 80, 120))).unwrap(),
    );
    let out = tmp.path().join("out");
    let o = run(&[
        "--input",
        path_str(&input),
        "--out-dir",
        path_str(&out),
        "--algorithm",
        "lloyd",
        "--clusters",
        "1",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let seg = decode_rgb(&std::fs::read(out.join("segmented.png")).unwrap()).unwrap();
    let first = seg.pixels()[0];
    assert!(seg.pixels().iter().all(|&c| c == first));
    // the only point is the subcube centre (47.5, 79.5, 111.5), rounded half up
    assert_eq!(first, Rgb8::new(48, 80, 112));
    let r = report(&out);
    assert_eq!(value(&r, "final_j"), "0.000000");
    assert_eq!(value(&r, "occupied_subcubes"), "1");
    assert_eq!(value(&r, "chromosome_length"), "0");
}

#[test]
fn default_ga_masks_partition_the_map() {
    let tmp = tempfile::tempdir().unwrap();
    let img = six_colour_map();
    let input = write(tmp.path(), "map.png", &encode_png_rgb(&img).unwrap());
    let out = tmp.path().join("out");
    let o = run(&[
        "--input",
        path_str(&input),
        "--out-dir",
        path_str(&out),
        "--masks",
        "--trace",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let mut set = 0usize;
    for i in 0..6 {
        let mask = image::open(out.join(format!("mask_{i}.png")))
            .unwrap()
            .into_luma8();
        set += mask.pixels().filter(|p| p.0[0] == 0).count();
    }
    assert_eq!(set, img.len());
    assert!(!out.join("mask_6.png").exists());

    let r = report(&out);
    let occupied: usize = value(&r, "occupied_subcubes").parse().unwrap();
    assert!(occupied <= 512);
    assert_eq!(
        value(&r, "chromosome_length").parse::<usize>().unwrap(),
        occupied * 3
    );
    let pixels: u64 = (0..6)
        .map(|i| {
            value(&r, &format!("cluster_{i}_pixels"))
                .parse::<u64>()
                .unwrap()
        })
        .sum();
    assert_eq!(pixels, img.len() as u64);

    let trace = std::fs::read_to_string(out.join("trace.csv")).unwrap();
    let mut lines = trace.lines();
    assert_eq!(
        lines.next(),
        Some("generation,best_so_far_j,gen_best_j,gen_mean_j")
    );
    let best: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(best.len(), 10_001);
    assert!(best.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(tmp.path(), "map.ppm", &encode_ppm(&six_colour_map()));
    let mut runs = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let o = run(&[
            "--input",
            path_str(&input),
            "--out-dir",
            path_str(&out),
            "--generations",
            "1",
            "--trace",
            "--masks",
            "--seed",
            "11",
        ]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&o.stderr)
        );
        runs.push(out);
    }
    let trace = std::fs::read_to_string(runs[0].join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 3);
    for file in ["segmented.png", "trace.csv", "mask_0.png", "mask_5.png"] {
        assert_eq!(
            std::fs::read(runs[0].join(file)).unwrap(),
            std::fs::read(runs[1].join(file)).unwrap(),
            "{file}"
        );
    }
    let strip = |d: &Path| {
        report(d)
            .into_iter()
            .filter(|(k, _)| k != "elapsed_seconds")
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&runs[0]), strip(&runs[1]));
}

#[test]
fn config_errors_exit_1_and_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(
        tmp.path(),
        "solid.png",
        &encode_png_rgb(&Raster::filled(2, 2, Rgb8::default())).unwrap(),
    );
    let out = tmp.path().join("out");
    for (flag, value, field) in [
        ("--cube-side", "24", "cube-side"),
        ("--clusters", "0", "clusters"),
        ("--elite", "50", "elite"),
        ("--crossover-rate", "1.5", "crossover-rate"),
        ("--algorithm", "kmeans", "algorithm"),
        ("--population", "many", "population"),
    ] {
        let o = run(&[
            "--input",
            path_str(&input),
            "--out-dir",
            path_str(&out),
            flag,
            value,
        ]);
        assert_eq!(o.status.code(), Some(1), "{flag} {value}");
        assert!(
            String::from_utf8_lossy(&o.stderr).contains(field),
            "{flag}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert!(!out.exists());
}

#[test]
fn brute_force_budget_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(
        tmp.path(),
        "map.png",
        &encode_png_rgb(&six_colour_map()).unwrap(),
    );
    let out = tmp.path().join("out");
    let o = run(&[
        "--input",
        path_str(&input),
        "--out-dir",
        path_str(&out),
        "--algorithm",
        "brute",
        "--cube-side",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--algorithm ga"));
    assert!(!out.join("report.txt").exists());
}

#[test]
fn brute_force_on_small_instance() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(
        tmp.path(),
        "map.png",
        &encode_png_rgb(&six_colour_map()).unwrap(),
    );
    let out = tmp.path().join("out");
    let o = run(&[
        "--input",
        path_str(&input),
        "--out-dir",
        path_str(&out),
        "--algorithm",
        "brute",
        "--cube-side",
        "128",
        "--clusters",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(value(&report(&out), "algorithm"), "brute");
}

#[test]
fn config_file_with_flag_override() {
    let tmp = tempfile::tempdir().unwrap();
    let input = write(
        tmp.path(),
        "map.png",
        &encode_png_rgb(&six_colour_map()).unwrap(),
    );
    let out = tmp.path().join("out");
    let cfg = write(
        tmp.path(),
        "run.cfg",
        format!("# test run\ninput={}\nout-dir={}\nclusters=3\ngenerations=5\nseed=4\nmutation-mode=bit\nmutation-rate=0.01\n", input.display(), out.display()).as_bytes(),
    );
    let o = run(&["--config", path_str(&cfg), "--clusters", "4"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = report(&out);
    assert_eq!(value(&r, "clusters"), "4");
    assert_eq!(value(&r, "generations"), "5");
    assert_eq!(value(&r, "seed"), "4");
    assert_eq!(value(&r, "mutation_mode"), "bit");

    let bad = write(tmp.path(), "bad.cfg", b"colours=9\n");
    let o = run(&["--config", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--config", "/no/such/config"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_exits_0() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("--mutation-mode"));
}
