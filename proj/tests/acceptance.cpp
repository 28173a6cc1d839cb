// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.
#include "json.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>

#include "hilbert_selberg/hilbert_selberg.h"

int main(int argc, char** argv)
{
    unsigned seed = argc > 1 ? static_cast<unsigned>(std::strtoul(argv[1], nullptr, 10)) : 1;
    int failed = 0;
    for (int id = 1; id <= hs_check_count(); ++id) {
        int pass = 0;
        char* out = nullptr;
        hs_status s = hs_check_run(id, seed, &pass, &out);
        if (s != HS_OK) {
            std::printf("FAIL  %d  error: %s\n", id, hs_last_error());
            ++failed;
            continue;
        }
        nlohmann::json r = nlohmann::json::parse(out);
        hs_string_free(out);
        std::printf("%s  %d  %s  (%.3g s)  %s\n", pass ? "PASS" : "FAIL", id, r["name"].get<std::string>().c_str(),
                    r["seconds"].get<double>(), r["detail"].get<std::string>().c_str());
        std::fflush(stdout);
        failed += pass ? 0 : 1;
    }
    std::printf("%d of %d criteria pass\n", hs_check_count() - failed, hs_check_count());
    return failed ? 1 : 0;
}
