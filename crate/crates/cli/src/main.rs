use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::init();
    let code = robustge_cli::execute(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    );
    ExitCode::from(code)
}
