use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let outcome = sgh_cli::run_cli(std::env::args_os());
    let text = match outcome.report.get("help").and_then(|h| h.as_str()) {
        Some(help) => help.to_string(),
        None => format!(
            "{}\n",
            serde_json::to_string_pretty(&outcome.report).expect("report serializes")
        ),
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
    ExitCode::from(outcome.code as u8)
}
