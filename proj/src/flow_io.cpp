#include "wpc/flow_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace wpc {

FlowField read_flo(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path);

    float magic = 0.0f;
    if (!in.read(reinterpret_cast<char*>(&magic), sizeof magic))
        throw Error(ErrorCode::TruncatedFile, path + ": missing header");
    if (magic != kFloMagic)
        throw Error(ErrorCode::BadMagic, path + ": not a .flo file");

    std::int32_t w = 0;
    std::int32_t h = 0;
    if (!in.read(reinterpret_cast<char*>(&w), sizeof w) ||
        !in.read(reinterpret_cast<char*>(&h), sizeof h))
        throw Error(ErrorCode::TruncatedFile, path + ": missing dimensions");
    if (w < 1 || h < 1 || w > 100000 || h > 100000)
        throw Error(ErrorCode::InvalidArgument, path + ": implausible flow dimensions");

    std::vector<float> buf(static_cast<size_t>(w) * h * 2);
    if (!in.read(reinterpret_cast<char*>(buf.data()),
                 static_cast<std::streamsize>(buf.size() * sizeof(float))))
        throw Error(ErrorCode::TruncatedFile, path + ": payload shorter than header claims");

    FlowField flow(w, h);
    for (size_t k = 0; k < buf.size(); ++k) {
        if (!std::isfinite(buf[k]))
            throw Error(ErrorCode::InvalidArgument, path + ": non-finite flow component");
        flow.data[k] = buf[k];
    }
    return flow;
}

void write_flo(const std::string& path, const FlowField& flow) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write " + path);

    float magic = kFloMagic;
    std::int32_t w = flow.width;
    std::int32_t h = flow.height;
    out.write(reinterpret_cast<const char*>(&magic), sizeof magic);
    out.write(reinterpret_cast<const char*>(&w), sizeof w);
    out.write(reinterpret_cast<const char*>(&h), sizeof h);

    std::vector<float> buf(flow.data.size());
    for (size_t k = 0; k < buf.size(); ++k) buf[k] = static_cast<float>(flow.data[k]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)));
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace wpc
