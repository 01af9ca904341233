use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use haarsteg::{
    derive_keystream, embed, read_pixmap, read_stego, resize_cover, write_pixmap, write_stego,
    ColorImage, GrayImage, Mode, PayloadFrame, Pixmap, StegoContainer,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_haarsteg"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn haarsteg")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn random_gray(rng: &mut ChaCha8Rng, w: usize, h: usize) -> GrayImage {
    GrayImage::new(w, h, (0..w * h).map(|_| rng.random()).collect()).unwrap()
}

fn random_pixmap(rng: &mut ChaCha8Rng, w: usize, h: usize, channels: usize) -> Pixmap {
    if channels == 1 {
        Pixmap::Gray(random_gray(rng, w, h))
    } else {
        let (r, g, b) = (
            random_gray(rng, w, h),
            random_gray(rng, w, h),
            random_gray(rng, w, h),
        );
        Pixmap::Color(ColorImage::new(r, g, b).unwrap())
    }
}

fn save(dir: &TempDir, name: &str, bytes: &[u8]) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, bytes).unwrap();
    path
}

#[test]
fn full_capacity_raw_embed_and_extract() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let cover_img = random_pixmap(&mut rng, 512, 512, 1);
    let secret_img = random_pixmap(&mut rng, 512, 256, 1);
    let cover = save(&dir, "cover.pgm", &write_pixmap(&cover_img, false));
    let secret = save(&dir, "secret.pgm", &write_pixmap(&secret_img, false));
    let stego = dir.path().join("stego.pgm");

    let out = run(&[
        "embed",
        "-c",
        p(&cover),
        "-s",
        p(&secret),
        "-o",
        p(&stego),
        "--mode",
        "raw",
        "-k",
        "coin",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("embedded 131072 of 131072 bytes"));
    assert!(stdout(&out).contains("raw digit count: 524288"));

    // The file on disk is exactly what the library produces in memory.
    let Pixmap::Gray(ref g) = cover_img else {
        unreachable!()
    };
    let Pixmap::Gray(ref s) = secret_img else {
        unreachable!()
    };
    let expected = embed(
        &resize_cover(g, 0).unwrap(),
        &PayloadFrame::raw(s.samples().to_vec()),
        &derive_keystream(b"coin"),
    )
    .unwrap();
    let on_disk = std::fs::read(&stego).unwrap();
    assert_eq!(
        on_disk,
        write_stego(&StegoContainer::try_from(&expected).unwrap()).unwrap()
    );
    assert_eq!(
        read_stego(&on_disk).unwrap().into_planes(),
        expected.into_planes()
    );

    let extracted = dir.path().join("out.pgm");
    let out = run(&[
        "extract",
        "-s",
        p(&stego),
        "-o",
        p(&extracted),
        "--mode",
        "raw",
        "-k",
        "coin",
        "--raw-digit-count",
        "524288",
        "--width",
        "512",
        "--height",
        "256",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(&extracted).unwrap(),
        std::fs::read(&secret).unwrap()
    );
}

#[test]
fn capacity_boundary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cover = save(
        &dir,
        "c.pgm",
        &write_pixmap(&random_pixmap(&mut rng, 4, 4, 1), false),
    );
    let stego = dir.path().join("s.pgm");
    // 4x4 raw capacity is 8 bytes.
    let fits = save(&dir, "fits.bin", &[7u8; 8]);
    let over = save(&dir, "over.bin", &[7u8; 9]);
    let args = |secret: &Path| {
        run(&[
            "embed",
            "-c",
            p(&cover),
            "-s",
            p(secret),
            "-o",
            p(&stego),
            "--mode",
            "raw",
        ])
    };
    assert_eq!(code(&args(&fits)), 0);
    let out = args(&over);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("9 bytes") && err.contains("holds 8"), "{err}");
}

#[test]
fn framed_image_secret_round_trips_and_wrong_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let cover = save(
        &dir,
        "c.ppm",
        &write_pixmap(&random_pixmap(&mut rng, 40, 30, 3), false),
    );
    let secret = save(
        &dir,
        "s.pgm",
        &write_pixmap(&random_pixmap(&mut rng, 20, 17, 1), false),
    );
    let stego = dir.path().join("st.ppm");
    let out = run(&[
        "embed",
        "-c",
        p(&cover),
        "-s",
        p(&secret),
        "-o",
        p(&stego),
        "-k",
        "alpha",
        "-b",
        "7",
    ]);
    assert_eq!(code(&out), 0);

    let got = dir.path().join("got.pgm");
    let out = run(&["extract", "-s", p(&stego), "-o", p(&got), "-k", "alpha"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        std::fs::read(&got).unwrap(),
        std::fs::read(&secret).unwrap()
    );

    let out = run(&["extract", "-s", p(&stego), "-o", p(&got), "-k", "beta"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn raw_extract_without_count_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let stego = save(
        &dir,
        "s.pgm",
        b"P5\n2 2\n65535\n\x02\x00\x02\x00\x02\x00\x02\x00",
    );
    let out = run(&[
        "extract",
        "-s",
        p(&stego),
        "-o",
        p(&dir.path().join("o")),
        "--mode",
        "raw",
    ]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--raw-digit-count"));
}

#[test]
fn malformed_stego_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let stego = save(&dir, "s.pgm", b"P5\n2 2\n255\n\0\0\0\0");
    let out = run(&["extract", "-s", p(&stego), "-o", p(&dir.path().join("o"))]);
    assert_eq!(code(&out), 1);
    let out = run(&["verify", "-s", p(&dir.path().join("missing.pgm"))]);
    assert_eq!(code(&out), 1);
}

/// Embed a bytes secret into a random gray cover; returns (cover path, stego path, secret).
fn embedded(dir: &TempDir, seed: u64) -> (PathBuf, PathBuf, Vec<u8>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cover = save(
        dir,
        "c.pgm",
        &write_pixmap(&random_pixmap(&mut rng, 16, 16, 1), false),
    );
    let payload: Vec<u8> = (0..100).map(|_| rng.random()).collect();
    let secret = save(dir, "secret.bin", &payload);
    let stego = dir.path().join("s.pgm");
    let out = run(&[
        "embed",
        "-c",
        p(&cover),
        "-s",
        p(&secret),
        "-o",
        p(&stego),
        "-k",
        "v",
        "-b",
        "3",
    ]);
    assert_eq!(code(&out), 0);
    (cover, stego, payload)
}

#[test]
fn verify_untouched_and_tampered() {
    let dir = TempDir::new().unwrap();
    let (cover, stego, _) = embedded(&dir, 13);
    let recovered = dir.path().join("rec.pgm");
    let out = run(&[
        "verify",
        "-s",
        p(&stego),
        "-c",
        p(&cover),
        "-o",
        p(&recovered),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(
        text.contains("MSE 0") && text.contains("PSNR INF"),
        "{text}"
    );
    assert_eq!(
        std::fs::read(&recovered).unwrap(),
        std::fs::read(&cover).unwrap()
    );

    let mut planes = read_stego(&std::fs::read(&stego).unwrap())
        .unwrap()
        .into_planes();
    planes[0].samples_mut()[5] += 1;
    let bad = save(
        &dir,
        "bad.pgm",
        &write_stego(&StegoContainer::new(planes).unwrap()).unwrap(),
    );
    assert_eq!(code(&run(&["verify", "-s", p(&bad)])), 4);

    // A different cover of the right size does not authenticate either.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let other = save(
        &dir,
        "other.pgm",
        &write_pixmap(&random_pixmap(&mut rng, 16, 16, 1), false),
    );
    assert_eq!(code(&run(&["verify", "-s", p(&stego), "-c", p(&other)])), 4);
}

#[test]
fn sum_preserving_edit_keeps_cover_but_changes_payload() {
    let dir = TempDir::new().unwrap();
    let (cover, stego, payload) = embedded(&dir, 14);
    let mut planes = read_stego(&std::fs::read(&stego).unwrap())
        .unwrap()
        .into_planes();
    // Block 0 of a 32-wide plane: r01 at index 1, r10 at index 32.
    planes[0].samples_mut()[1] += 1;
    planes[0].samples_mut()[32] -= 1;
    let edited = save(
        &dir,
        "edited.pgm",
        &write_stego(&StegoContainer::new(planes).unwrap()).unwrap(),
    );
    assert_eq!(
        code(&run(&["verify", "-s", p(&edited), "-c", p(&cover)])),
        0
    );

    // The first block holds header digits, so a framed extraction now fails.
    let got = dir.path().join("got.bin");
    let out = run(&["extract", "-s", p(&edited), "-o", p(&got), "-k", "v"]);
    match code(&out) {
        3 => {}
        0 => assert_ne!(std::fs::read(&got).unwrap(), payload),
        other => panic!("unexpected exit {other}"),
    }
}

#[test]
fn lossless_corpus_across_modes_betas_and_channels() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mut trials = 0;
    for mode in ["framed", "raw"] {
        for beta in ["0", "7"] {
            for channels in [1, 3] {
                for _ in 0..3 {
                    let (w, h) = (rng.random_range(6..20), rng.random_range(6..20));
                    let cover = save(
                        &dir,
                        "c.pnm",
                        &write_pixmap(&random_pixmap(&mut rng, w, h, channels), false),
                    );
                    let cap = haarsteg::capacity_bytes(
                        w,
                        h,
                        channels,
                        if mode == "raw" {
                            Mode::Raw
                        } else {
                            Mode::Framed
                        },
                    );
                    let payload: Vec<u8> = (0..rng.random_range(1..=cap))
                        .map(|_| rng.random())
                        .collect();
                    let secret = save(&dir, "p.bin", &payload);
                    let key = format!("k{}", rng.random::<u32>());
                    let stego = dir.path().join("s.pnm");
                    let out = run(&[
                        "embed",
                        "-c",
                        p(&cover),
                        "-s",
                        p(&secret),
                        "-o",
                        p(&stego),
                        "-k",
                        &key,
                        "-b",
                        beta,
                        "--mode",
                        mode,
                        "--as-bytes",
                        "-q",
                    ]);
                    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
                    assert!(out.stdout.is_empty());
                    let got = dir.path().join("g.bin");
                    let count = (4 * payload.len()).to_string();
                    let mut args = vec![
                        "extract",
                        "-s",
                        p(&stego),
                        "-o",
                        p(&got),
                        "-k",
                        &key,
                        "--mode",
                        mode,
                    ];
                    if mode == "raw" {
                        args.extend(["--raw-digit-count", &count]);
                    }
                    assert_eq!(code(&run(&args)), 0);
                    assert_eq!(std::fs::read(&got).unwrap(), payload);
                    assert_eq!(code(&run(&["verify", "-s", p(&stego), "-c", p(&cover)])), 0);
                    trials += 1;
                }
            }
        }
    }
    assert!(trials >= 20);
}

#[test]
fn metrics_command() {
    let dir = TempDir::new().unwrap();
    let a = save(&dir, "a.pgm", b"P2 2 2 255 2 2 2 2");
    let b = save(&dir, "b.pgm", b"P2 2 2 255 1 1 1 1");
    let out = run(&["metrics", "-r", p(&a), "-d", p(&b), "--emit", "csv"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "mse,psnr,fidelity\n1.000000,48.130804,0.750000\n"
    );
    let out = run(&["metrics", "-r", p(&a), "-d", p(&a)]);
    assert!(stdout(&out).contains("PSNR INF"));
    let out = run(&["metrics", "-r", p(&a), "-d", p(&a), "--emit", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["psnr"], serde_json::Value::Null);
    assert_eq!(v["fidelity"], 1.0);
}

fn bench_dir(count: usize) -> TempDir {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for i in 0..count {
        let img = random_pixmap(&mut rng, 64, 64, 1);
        save(
            &dir,
            &format!("cover{i:02}.pgm"),
            &write_pixmap(&img, false),
        );
    }
    save(&dir, "notes.txt", b"ignored");
    dir
}

#[test]
fn bench_report_structure_and_determinism() {
    let dir = bench_dir(10);
    let args = [
        "bench",
        "-c",
        p(dir.path()),
        "--emit",
        "csv",
        "--no-timing",
        "-k",
        "t",
    ];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let text = stdout(&first);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "name,mse,psnr,fidelity,capacity_bytes,millis");
    assert_eq!(lines.len(), 1 + 10 + 1);
    assert!(lines[1].starts_with("cover00,"));
    let avg: Vec<&str> = lines[11].split(',').collect();
    assert_eq!(avg[0], "average");
    assert_eq!(avg[4], "2048");
    // Uniform digits on upscaled blocks: analytic 5.125 per sample.
    let mse: f64 = avg[1].parse().unwrap();
    assert!((mse - 5.125).abs() < 0.2, "{mse}");
    assert_eq!(run(&args).stdout, first.stdout);

    let json = run(&["bench", "-c", p(dir.path()), "--emit", "json"]);
    let rows: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 11);
}

#[test]
fn bench_with_secret_file_and_empty_dir() {
    let dir = bench_dir(2);
    let secret = dir.path().join("secret.bin");
    std::fs::write(&secret, [0xE4u8; 100]).unwrap();
    let report = dir.path().join("report.csv");
    let out = run(&[
        "bench",
        "-c",
        p(dir.path()),
        "-s",
        p(&secret),
        "--emit",
        "csv",
        "-o",
        p(&report),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&report).unwrap();
    assert_eq!(text.lines().count(), 4);

    let empty = TempDir::new().unwrap();
    assert_eq!(code(&run(&["bench", "-c", p(empty.path())])), 1);
}

#[test]
fn help_lists_exit_codes() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("Exit codes"));
    assert_eq!(code(&run(&["embed", "--beta", "300"])), 1);
}

#[test]
fn recovered_cover_matches_for_color() {
    let dir = TempDir::new().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let img = random_pixmap(&mut rng, 9, 5, 3);
    let cover = save(&dir, "c.ppm", &write_pixmap(&img, true));
    let secret = save(&dir, "s.bin", b"colorful");
    let stego = dir.path().join("s.ppm");
    assert_eq!(
        code(&run(&[
            "embed",
            "-c",
            p(&cover),
            "-s",
            p(&secret),
            "-o",
            p(&stego)
        ])),
        0
    );
    let rec = dir.path().join("r.ppm");
    assert_eq!(code(&run(&["verify", "-s", p(&stego), "-o", p(&rec)])), 0);
    assert_eq!(read_pixmap(&std::fs::read(&rec).unwrap()).unwrap(), img);
}
