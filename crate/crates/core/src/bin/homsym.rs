use clap::Parser;

fn main() {
    let cli = homsym::cli::Cli::parse();
    if let Err(e) = homsym::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(homsym::cli::exit_code(&e));
    }
}
