use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let (code, value) = spincat::cli::run_from_args(std::env::args_os());
    if !value.is_null() {
        println!("{value}");
    }
    ExitCode::from(code as u8)
}
