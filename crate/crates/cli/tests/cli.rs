//! End-to-end tests of the binary: exit statuses, diagnostics, stage
//! composability, and determinism.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toki"))
}

fn demo_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("demo")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_status(output: &Output, expected: i32) {
    assert_eq!(
        output.status.code(),
        Some(expected),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

fn read_dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let entry = entry.unwrap();
        out.insert(
            entry.file_name().to_string_lossy().to_string(),
            std::fs::read(entry.path()).unwrap(),
        );
    }
    out
}

#[test]
fn filter_keeps_one_sentence_of_three_messages() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("messages.jsonl");
    std::fs::write(
        &input,
        concat!(
            "{\"text\": \"jan li pona.\", \"timestamp\": \"2024-01-01T00:00:00Z\", \"corpus\": \"c\"}\n",
            "{\"text\": \"the cat is cute\", \"timestamp\": \"2024-01-01T00:00:00Z\", \"corpus\": \"c\"}\n",
            "{\"text\": \"nice weather today\", \"timestamp\": \"2024-01-01T00:00:00Z\", \"corpus\": \"c\"}\n",
        ),
    )
    .unwrap();
    let output_path = dir.path().join("filtered.jsonl");
    let output = run(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output",
        output_path.to_str().unwrap(),
    ]);
    assert_status(&output, 0);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("sentences_kept=1"), "stderr: {stderr}");
    let written = std::fs::read_to_string(&output_path).unwrap();
    assert_eq!(written.lines().count(), 1);
    assert!(written.contains("\"tokens\":[\"jan\",\"li\",\"pona\"]"));
}

#[test]
fn unreadable_input_is_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "filter",
        "--input",
        dir.path().join("missing.jsonl").to_str().unwrap(),
        "--output",
        dir.path().join("out.jsonl").to_str().unwrap(),
    ]);
    assert_status(&output, 2);
}

#[test]
fn malformed_record_is_status_3_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("messages.jsonl");
    std::fs::write(
        &input,
        "{\"text\": \"jan li pona\", \"timestamp\": \"2024-01-01T00:00:00Z\", \"corpus\": \"c\"}\nnot json\n",
    )
    .unwrap();
    let output = run(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path().join("out.jsonl").to_str().unwrap(),
    ]);
    assert_status(&output, 3);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains(":2:"), "stderr: {stderr}");
}

#[test]
fn report_without_series_is_status_4() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("agg.csv");
    std::fs::write(&input, "corpus,year,word,tag,count\n").unwrap();
    let output = run(&[
        "report",
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path().join("report").to_str().unwrap(),
    ]);
    assert_status(&output, 4);
}

#[test]
fn bad_threshold_is_status_4() {
    let demo = demo_dir();
    let dir = tempfile::tempdir().unwrap();
    let output = run(&[
        "filter",
        "--input",
        demo.join("messages.jsonl").to_str().unwrap(),
        "--output",
        dir.path().join("out.jsonl").to_str().unwrap(),
        "--threshold",
        "1.5",
    ]);
    assert_status(&output, 4);
}

#[test]
fn stagewise_equals_all_byte_for_byte() {
    let demo = demo_dir();
    let dir = tempfile::tempdir().unwrap();
    let all_dir = dir.path().join("all");
    let stage_dir = dir.path().join("stages");
    std::fs::create_dir_all(&stage_dir).unwrap();
    let config = demo.join("config.toml");
    let messages = demo.join("messages.jsonl");

    let output = run(&[
        "all",
        "--config",
        config.to_str().unwrap(),
        "--input",
        messages.to_str().unwrap(),
        "--output",
        all_dir.to_str().unwrap(),
    ]);
    assert_status(&output, 0);

    let filtered = stage_dir.join("filtered.jsonl");
    let tagged = stage_dir.join("tagged.jsonl");
    let aggregated = stage_dir.join("aggregated.csv");
    for (stage, input, out) in [
        ("filter", messages.clone(), filtered.clone()),
        ("tag", filtered.clone(), tagged.clone()),
        ("aggregate", tagged.clone(), aggregated.clone()),
    ] {
        let output = run(&[
            stage,
            "--config",
            config.to_str().unwrap(),
            "--input",
            input.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_status(&output, 0);
    }
    let output = run(&[
        "report",
        "--config",
        config.to_str().unwrap(),
        "--input",
        aggregated.to_str().unwrap(),
        "--output",
        stage_dir.to_str().unwrap(),
    ]);
    assert_status(&output, 0);

    let all_files = read_dir_bytes(&all_dir);
    let stage_files = read_dir_bytes(&stage_dir);
    assert_eq!(
        all_files.keys().collect::<Vec<_>>(),
        stage_files.keys().collect::<Vec<_>>()
    );
    for (name, bytes) in &all_files {
        assert_eq!(bytes, &stage_files[name], "{name} differs");
    }
}

#[test]
fn parse_stage_emits_selected_bracketings() {
    let demo = demo_dir();
    let dir = tempfile::tempdir().unwrap();
    let filtered = dir.path().join("filtered.jsonl");
    let parsed = dir.path().join("parsed.jsonl");
    let output = run(&[
        "filter",
        "--input",
        demo.join("messages.jsonl").to_str().unwrap(),
        "--output",
        filtered.to_str().unwrap(),
    ]);
    assert_status(&output, 0);
    let output = run(&[
        "parse",
        "--input",
        filtered.to_str().unwrap(),
        "--output",
        parsed.to_str().unwrap(),
    ]);
    assert_status(&output, 0);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("rejected=1"), "stderr: {stderr}");
    let body = std::fs::read_to_string(&parsed).unwrap();
    assert!(body.contains("\"bracketing\":\"[S [P [C jan]] li [PRED [P [C moku]] [ETAIL [EP e [P [C kili]]]]]]\""));
    assert!(body.contains("\"parses\":"));
}

#[test]
fn corpus_flag_restricts_the_report() {
    let demo = demo_dir();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all");
    let output = run(&[
        "all",
        "--config",
        demo.join("config.toml").to_str().unwrap(),
        "--input",
        demo.join("messages.jsonl").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--corpus",
        "demo-books",
    ]);
    assert_status(&output, 0);
    let series = std::fs::read_to_string(out.join("luka-tverb.csv")).unwrap();
    for line in series.lines().skip(1) {
        assert!(line.starts_with("demo-books,"), "line: {line}");
    }
}

#[test]
fn custom_grammar_and_lexicon_flags_are_honored() {
    let dir = tempfile::tempdir().unwrap();
    // a reduced grammar that only accepts bare content phrases
    let grammar = dir.path().join("tiny.tp");
    std::fs::write(&grammar, "S -> P\nP -> C\nP -> P C\nC -> <CONTENT>\n").unwrap();
    let lexicon = dir.path().join("tiny.txt");
    std::fs::write(
        &lexicon,
        "toki,C\nlon,RC\ntawa,RC\ntan,RC\nkepeken,RC\nsama,RC\nli,P\ne,P\nla,P\npi,P\no,P\nen,P\nanu,P\n",
    )
    .unwrap();
    let input = dir.path().join("in.jsonl");
    std::fs::write(
        &input,
        "{\"text\": \"toki. jan li pona.\", \"timestamp\": \"2024-01-01T00:00:00Z\", \"corpus\": \"c\"}\n",
    )
    .unwrap();
    let filtered = dir.path().join("filtered.jsonl");
    let output = run(&[
        "filter",
        "--input",
        input.to_str().unwrap(),
        "--output",
        filtered.to_str().unwrap(),
        "--lexicon",
        lexicon.to_str().unwrap(),
        "--threshold",
        "0.5",
    ]);
    assert_status(&output, 0);
    let tagged = dir.path().join("tagged.jsonl");
    let output = run(&[
        "tag",
        "--input",
        filtered.to_str().unwrap(),
        "--output",
        tagged.to_str().unwrap(),
        "--grammar",
        grammar.to_str().unwrap(),
        "--lexicon",
        lexicon.to_str().unwrap(),
    ]);
    assert_status(&output, 0);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("tagged=1"), "stderr: {stderr}");

    // a broken grammar is a configuration error
    let bad = dir.path().join("bad.tp");
    std::fs::write(&bad, "S -> X\n").unwrap();
    let output = run(&[
        "tag",
        "--input",
        filtered.to_str().unwrap(),
        "--output",
        tagged.to_str().unwrap(),
        "--grammar",
        bad.to_str().unwrap(),
    ]);
    assert_status(&output, 4);
    assert!(String::from_utf8_lossy(&output.stderr).contains("X"));
}

#[test]
fn threshold_flag_overrides_config() {
    let demo = demo_dir();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.jsonl");
    let strict = run(&[
        "filter",
        "--config",
        demo.join("config.toml").to_str().unwrap(),
        "--input",
        demo.join("messages.jsonl").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--threshold",
        "0",
    ]);
    assert_status(&strict, 0);
    let stderr = String::from_utf8_lossy(&strict.stderr);
    // threshold 0 keeps every non-empty sentence, including English ones
    assert!(stderr.contains("sentences_kept=49"), "stderr: {stderr}");
}
