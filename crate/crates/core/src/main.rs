fn main() {
    templikit::cli::main_exit()
}
