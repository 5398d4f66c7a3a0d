#include "robscatter/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "robscatter/errors.hpp"

namespace robscatter {

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        os << contents;
        os.flush();
        if (!os) {
            os.close();
            std::filesystem::remove(tmp);
            throw Error("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string header_comment(const std::string& what) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return "# robscatter " + what + " " + buf + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace robscatter
