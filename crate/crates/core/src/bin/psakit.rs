use clap::Parser;

fn main() {
    let cli = psakit::cli::Cli::parse();
    let code = psakit::cli::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
