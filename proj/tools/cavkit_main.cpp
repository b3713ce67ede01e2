// cavkit command-line tool. Thin wrapper over the shared library's C API:
// parses `cavkit <command> [--config FILE]... [--<key> <value>]...`, builds a
// config, runs the command and reports the run directory.

#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "cavkit.h"

namespace {

constexpr const char* kUsage =
    "usage: cavkit <command> [--config FILE]... [--<section.key> <value>]...\n"
    "\n"
    "commands:\n"
    "  gen       generate the synthetic two-domain benchmark corpus\n"
    "  train     train a classifier (built-in encoder or imported embeddings)\n"
    "  eval      evaluate a model on labeled sets (incl. explicitness subsets)\n"
    "  tcav      concept sensitivity scores vs a random-baseline concept\n"
    "  doe       degree-of-explicitness scores, histograms and bin analysis\n"
    "  augment   DoE/confidence/random augmentation sweep with retraining\n"
    "  vocab     positive-class frequency profiles and pairwise overlaps\n"
    "  report    render SVG figures from a previous run's CSV outputs\n"
    "\n"
    "Any configuration key can be set on the command line, e.g.\n"
    "  cavkit train --config run.cfg --train.lr 0.25 --out.dir runs\n"
    "Exit codes: 0 ok, 2 config error, 3 data error, 4 numeric failure.\n";

void print_error_json(const char* command, int code, const char* message) {
    const char* kind = code == 2 ? "config" : code == 3 ? "data" : code == 4 ? "numeric"
                                                                             : "internal";
    std::string escaped;
    for (const char* c = message; *c; ++c) {
        if (*c == '"' || *c == '\\') {
            escaped.push_back('\\');
            escaped.push_back(*c);
        } else if (*c == '\n') {
            escaped += "\\n";
        } else {
            escaped.push_back(*c);
        }
    }
    std::fprintf(stderr, "{\"error\":{\"command\":\"%s\",\"code\":%d,\"kind\":\"%s\",\"message\":\"%s\"}}\n",
                 command, code, kind, escaped.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2 || std::strcmp(argv[1], "--help") == 0 || std::strcmp(argv[1], "-h") == 0 ||
        std::strcmp(argv[1], "help") == 0) {
        std::fputs(kUsage, argc < 2 ? stderr : stdout);
        return argc < 2 ? 2 : 0;
    }
    if (std::strcmp(argv[1], "--version") == 0) {
        std::printf("cavkit %s\n", cavkit_version());
        return 0;
    }

    const char* command = argv[1];
    cavkit_config* cfg = cavkit_config_new();
    if (!cfg) {
        print_error_json(command, 1, "cannot allocate config");
        return 1;
    }

    int rc = 0;
    for (int i = 2; i < argc; ++i) {
        const char* arg = argv[i];
        if (std::strncmp(arg, "--", 2) != 0) {
            print_error_json(command, 2, (std::string("unexpected argument: ") + arg).c_str());
            rc = 2;
            break;
        }
        const char* key = arg + 2;
        if (i + 1 >= argc) {
            print_error_json(command, 2, (std::string("missing value for --") + key).c_str());
            rc = 2;
            break;
        }
        const char* value = argv[++i];
        const cavkit_status st = std::strcmp(key, "config") == 0
                                     ? cavkit_config_load_file(cfg, value)
                                     : cavkit_config_set(cfg, key, value);
        if (st != CAVKIT_OK) {
            print_error_json(command, static_cast<int>(st), cavkit_last_error());
            rc = static_cast<int>(st);
            break;
        }
    }

    if (rc == 0) {
        char run_dir[4096] = {0};
        const cavkit_status st = cavkit_run_command(command, cfg, run_dir, sizeof(run_dir));
        if (st != CAVKIT_OK) {
            print_error_json(command, static_cast<int>(st), cavkit_last_error());
            rc = static_cast<int>(st);
        } else {
            std::printf("run_dir: %s\n", run_dir);
        }
    }

    cavkit_config_free(cfg);
    return rc;
}
