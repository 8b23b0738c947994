#include <clocale>

#include "mfstruct/cli.hpp"

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");  // '.' decimal separator in every output
    std::vector<std::string> args(argv + 1, argv + argc);
    return mfstruct::cli::run(args);
}
