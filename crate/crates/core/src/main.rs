use std::io;

use brauer_split::cli::{run, LOG_ENV};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter(LOG_ENV)).init();
    let code = run(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
