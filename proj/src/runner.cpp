#include "diafair/runner.hpp"

#include "diafair/errors.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

extern char** environ;

namespace diafair {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to a sibling temp file, then renames over the target.
void write_atomic(const fs::path& target, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw Error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    out += '\'';
    return out;
}

struct ExitInfo {
    bool timed_out = false;
    int status = 0;
};

ExitInfo run_shell(const std::string& command, int timeout_seconds) {
    posix_spawnattr_t attr;
    posix_spawnattr_init(&attr);
    posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
    posix_spawnattr_setpgroup(&attr, 0);
    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
    posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);

    std::string sh = "/bin/sh";
    std::string dash_c = "-c";
    std::string cmd = command;
    char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};

    pid_t pid = 0;
    const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, argv, environ);
    posix_spawn_file_actions_destroy(&actions);
    posix_spawnattr_destroy(&attr);
    if (rc != 0) return {false, 127};

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_seconds);
    int wstatus = 0;
    while (true) {
        const pid_t r = ::waitpid(pid, &wstatus, WNOHANG);
        if (r == pid) break;
        if (r < 0) return {false, 127};
        if (std::chrono::steady_clock::now() >= deadline) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, &wstatus, 0);
            return {true, 0};
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (WIFEXITED(wstatus)) return {false, WEXITSTATUS(wstatus)};
    if (WIFSIGNALED(wstatus)) return {false, 128 + WTERMSIG(wstatus)};
    return {false, 127};
}

Hypothesis single_hypothesis(const std::string& id, const HypothesisMap& parsed) {
    Hypothesis h{id, {}};
    if (parsed.size() > 1) throw InvalidOutput(id, "output names several file ids");
    if (!parsed.empty()) h.segments = parsed.begin()->second.segments;
    return h;
}

std::optional<Hypothesis> read_cache(const UtteranceRecord& rec, const fs::path& rttm, const fs::path& sum,
                                     const std::string& checksum) {
    std::error_code ec;
    if (!fs::is_regular_file(rttm, ec) || !fs::is_regular_file(sum, ec)) return std::nullopt;
    try {
        if (read_file(sum) != checksum + "\n") return std::nullopt;
        const auto parsed = parse_rttm_string(read_file(rttm));
        if (parsed.size() > 1 || (parsed.size() == 1 && !parsed.contains(rec.utterance_id))) return std::nullopt;
        return single_hypothesis(rec.utterance_id, parsed);
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

std::string file_checksum(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest, &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex += kHex[digest[i] >> 4];
        hex += kHex[digest[i] & 0xF];
    }
    return hex;
}

std::string expand_command(const std::string& tmpl, const std::string& audio, const std::string& out) {
    std::string result;
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl.compare(i, 7, "{audio}") == 0) {
            result += shell_quote(audio);
            i += 7;
        } else if (tmpl.compare(i, 5, "{out}") == 0) {
            result += shell_quote(out);
            i += 5;
        } else {
            result += tmpl[i++];
        }
    }
    return result;
}

void RunnerConfig::validate() const {
    if (command_template.find("{audio}") == std::string::npos || command_template.find("{out}") == std::string::npos) {
        throw InvalidConfig("command template needs both {audio} and {out}");
    }
    if (timeout_seconds <= 0) throw InvalidConfig("timeout must be positive");
    if (workers == 0) throw InvalidConfig("workers must be at least 1");
    if (cache_dir.empty()) throw InvalidConfig("cache directory is required");
}

HypothesisMap load_hypotheses(const fs::path& location, const std::set<std::string>& ids, MissingPolicy policy) {
    HypothesisMap merged;
    std::error_code ec;
    if (fs::is_directory(location, ec)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(location)) {
            if (entry.is_regular_file() && entry.path().extension() == ".rttm") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& file : files) {
            const std::string text = read_file(file);
            HypothesisMap parsed = parse_rttm_string(text);
            if (parsed.empty()) {
                const std::string stem = file.stem().string();
                parsed.emplace(stem, Hypothesis{stem, {}});
            }
            for (auto& [id, hyp] : parsed) {
                if (!ids.contains(id)) continue;
                auto [it, inserted] = merged.emplace(id, hyp);
                if (!inserted && it->second != hyp) throw ConflictingHypothesis(id);
            }
        }
    } else if (fs::is_regular_file(location, ec)) {
        for (auto& [id, hyp] : parse_rttm_string(read_file(location))) {
            if (ids.contains(id)) merged.emplace(id, std::move(hyp));
        }
    } else {
        throw Error("hypotheses not found at " + location.string());
    }

    for (const auto& id : ids) {
        if (merged.contains(id)) continue;
        if (policy == MissingPolicy::Error) throw MissingHypothesis(id);
        merged.emplace(id, Hypothesis{id, {}});
    }
    return merged;
}

HypothesisMap run_diarizer(std::span<const UtteranceRecord> records, const RunnerConfig& config, RunStats* stats) {
    config.validate();
    fs::create_directories(config.cache_dir);
    const fs::path work_dir = config.cache_dir / ".work";
    fs::create_directories(work_dir);

    std::vector<std::optional<Hypothesis>> results(records.size());
    std::vector<std::exception_ptr> errors(records.size());
    // Per-utterance data errors may be absorbed by TreatAsZero; anything else always propagates.
    std::vector<char> recoverable(records.size(), 0);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> executed{0};
    std::atomic<std::size_t> hits{0};

    const auto process = [&](const UtteranceRecord& rec) -> Hypothesis {
        fs::path audio(rec.audio_path);
        if (audio.is_relative() && !config.audio_root.empty()) audio = config.audio_root / audio;
        std::error_code ec;
        if (!fs::is_regular_file(audio, ec)) throw MissingAudio(rec.utterance_id, audio.string());
        const std::string checksum = file_checksum(audio);

        const fs::path cached = config.cache_dir / (rec.utterance_id + ".rttm");
        const fs::path sum = config.cache_dir / (rec.utterance_id + ".sum");
        if (auto hit = read_cache(rec, cached, sum, checksum)) {
            ++hits;
            return *hit;
        }

        const fs::path out = work_dir / (rec.utterance_id + ".rttm");
        fs::remove(out, ec);
        ++executed;
        const auto exit = run_shell(expand_command(config.command_template, audio.string(), out.string()),
                                    config.timeout_seconds);
        if (exit.timed_out) throw DiarizerTimeout(rec.utterance_id);
        if (exit.status != 0) throw DiarizerFailed(rec.utterance_id, exit.status);
        if (!fs::is_regular_file(out, ec)) throw InvalidOutput(rec.utterance_id, "no file written at {out}");

        Hypothesis hyp;
        try {
            hyp = single_hypothesis(rec.utterance_id, parse_rttm_string(read_file(out)));
        } catch (const InvalidOutput&) {
            throw;
        } catch (const Error& e) {
            throw InvalidOutput(rec.utterance_id, e.what());
        }
        fs::remove(out, ec);

        HypothesisMap one;
        if (!hyp.segments.empty()) one.emplace(rec.utterance_id, hyp);
        write_atomic(cached, serialize_rttm(one));
        write_atomic(sum, checksum + "\n");
        // The cache stores two-decimal times; return what a later hit returns.
        return single_hypothesis(rec.utterance_id, parse_rttm_string(serialize_rttm(one)));
    };

    const auto worker = [&] {
        for (std::size_t i = next++; i < records.size(); i = next++) {
            try {
                results[i] = process(records[i]);
            } catch (const Error&) {
                errors[i] = std::current_exception();
                recoverable[i] = 1;
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t n_threads = std::min(config.workers, std::max<std::size_t>(records.size(), 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    HypothesisMap out;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& id = records[i].utterance_id;
        if (errors[i]) {
            if (config.missing_policy == MissingPolicy::Error || !recoverable[i]) std::rethrow_exception(errors[i]);
            ++failures;
            out.emplace(id, Hypothesis{id, {}});
            continue;
        }
        out.emplace(id, std::move(*results[i]));
    }
    if (stats) *stats = {executed.load(), hits.load(), failures};
    return out;
}

}  // namespace diafair
