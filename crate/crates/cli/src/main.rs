use std::io;

fn main() {
    let threads = std::env::var(qsl_cli::THREADS_ENV).ok();
    let code = qsl_cli::main_with(
        std::env::args_os(),
        threads.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    std::process::exit(code);
}
