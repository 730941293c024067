#include "dealerfield/cli.hpp"

int main(int argc, char** argv) { return dealerfield::cli::run(argc, argv); }
