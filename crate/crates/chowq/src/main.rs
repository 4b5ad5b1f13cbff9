use std::io::{self, Write};

fn main() {
    let budget = std::env::var(chowq::cli::BUDGET_VAR).ok();
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let code = chowq::run(std::env::args_os(), budget.as_deref(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
