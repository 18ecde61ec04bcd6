use clap::Parser;

fn main() {
    let cli = qcorr_cli::Cli::parse();
    std::process::exit(qcorr_cli::dispatch(cli));
}
