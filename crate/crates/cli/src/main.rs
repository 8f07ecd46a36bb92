use std::io::Write;

fn main() {
    let env_tol = std::env::var(qdeform_cli::TOL_ENV).ok();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = qdeform_cli::run(std::env::args_os(), env_tol.as_deref(), &mut stdout.lock(), &mut stderr.lock());
    let _ = stdout.lock().flush();
    std::process::exit(code);
}
