#include "fedx/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fedx/rng.hpp"
#include "json.hpp"

namespace fedx {

using json = nlohmann::json;

const char* layer_kind_name(LayerKind kind) {
  switch (kind) {
    case LayerKind::Dense: return "Dense";
    case LayerKind::Conv2D: return "Conv2D";
    case LayerKind::ReLU: return "ReLU";
    case LayerKind::MaxPool2D: return "MaxPool2D";
    case LayerKind::GlobalAvgPool: return "GlobalAvgPool";
    case LayerKind::Flatten: return "Flatten";
  }
  return "?";
}

size_t LayerSpec::units() const {
  if (kind == LayerKind::Dense) return out_features;
  if (kind == LayerKind::Conv2D) return out_channels;
  return 0;
}

size_t LayerSpec::fan_in() const {
  if (kind == LayerKind::Dense) return in_features;
  if (kind == LayerKind::Conv2D) return in_channels * kernel * kernel;
  return 0;
}

LayerSpec LayerSpec::dense(size_t in, size_t out, bool prunable) {
  LayerSpec s;
  s.kind = LayerKind::Dense;
  s.in_features = in;
  s.out_features = out;
  s.prunable = prunable;
  return s;
}

LayerSpec LayerSpec::conv2d(size_t in_c, size_t out_c, size_t kernel, size_t stride,
                            size_t padding, bool prunable) {
  LayerSpec s;
  s.kind = LayerKind::Conv2D;
  s.in_channels = in_c;
  s.out_channels = out_c;
  s.kernel = kernel;
  s.stride = stride;
  s.padding = padding;
  s.prunable = prunable;
  return s;
}

LayerSpec LayerSpec::relu() {
  LayerSpec s;
  s.kind = LayerKind::ReLU;
  return s;
}

LayerSpec LayerSpec::maxpool2d(size_t kernel, size_t stride) {
  LayerSpec s;
  s.kind = LayerKind::MaxPool2D;
  s.kernel = kernel;
  s.stride = stride == 0 ? kernel : stride;
  return s;
}

LayerSpec LayerSpec::global_avg_pool() {
  LayerSpec s;
  s.kind = LayerKind::GlobalAvgPool;
  return s;
}

LayerSpec LayerSpec::flatten() {
  LayerSpec s;
  s.kind = LayerKind::Flatten;
  return s;
}

std::string LayerSpec::describe() const {
  std::ostringstream os;
  os << layer_kind_name(kind);
  switch (kind) {
    case LayerKind::Dense:
      os << " " << in_features << "->" << out_features;
      break;
    case LayerKind::Conv2D:
      os << " " << in_channels << "->" << out_channels << " k" << kernel << " s" << stride
         << " p" << padding;
      break;
    case LayerKind::MaxPool2D:
      os << " k" << kernel << " s" << stride;
      break;
    default:
      break;
  }
  return os.str();
}

namespace {

std::string layer_tag(const std::vector<LayerSpec>& layers, long index) {
  if (index < 0) return "network input";
  std::ostringstream os;
  os << "layer " << index << " (" << layers[static_cast<size_t>(index)].describe() << ")";
  return os.str();
}

[[noreturn]] void build_error(const std::vector<LayerSpec>& layers, size_t i, long prev,
                              const std::string& what) {
  throw std::invalid_argument("build_network: " + layer_tag(layers, static_cast<long>(i)) +
                              " " + what + " produced by " + layer_tag(layers, prev));
}

// Computes the per-sample output shape of layer i given its input shape,
// validating compatibility against the producing layer `prev`.
std::vector<size_t> chain_shape(const std::vector<LayerSpec>& layers, size_t i, long prev,
                                const std::vector<size_t>& in) {
  const LayerSpec& s = layers[i];
  switch (s.kind) {
    case LayerKind::Dense: {
      if (in.size() != 1)
        build_error(layers, i, prev, "expects a feature vector but got shape " + shape_to_string(in));
      if (in[0] != s.in_features)
        build_error(layers, i, prev,
                    "expects in_features=" + std::to_string(s.in_features) + " but got " +
                        shape_to_string(in));
      return {s.out_features};
    }
    case LayerKind::Conv2D: {
      if (in.size() != 3)
        build_error(layers, i, prev, "expects a C,H,W input but got shape " + shape_to_string(in));
      if (in[0] != s.in_channels)
        build_error(layers, i, prev,
                    "expects in_channels=" + std::to_string(s.in_channels) + " but got " +
                        shape_to_string(in));
      size_t h = in[1] + 2 * s.padding;
      size_t w = in[2] + 2 * s.padding;
      if (s.kernel == 0 || h < s.kernel || w < s.kernel)
        build_error(layers, i, prev, "kernel does not fit input " + shape_to_string(in));
      return {s.out_channels, (h - s.kernel) / s.stride + 1, (w - s.kernel) / s.stride + 1};
    }
    case LayerKind::ReLU:
      return in;
    case LayerKind::MaxPool2D: {
      if (in.size() != 3)
        build_error(layers, i, prev, "expects a C,H,W input but got shape " + shape_to_string(in));
      if (s.kernel == 0 || in[1] < s.kernel || in[2] < s.kernel)
        build_error(layers, i, prev, "pool window does not fit input " + shape_to_string(in));
      return {in[0], (in[1] - s.kernel) / s.stride + 1, (in[2] - s.kernel) / s.stride + 1};
    }
    case LayerKind::GlobalAvgPool: {
      if (in.size() != 3)
        build_error(layers, i, prev, "expects a C,H,W input but got shape " + shape_to_string(in));
      return {in[0]};
    }
    case LayerKind::Flatten: {
      if (in.size() != 3)
        build_error(layers, i, prev, "expects a C,H,W input but got shape " + shape_to_string(in));
      return {in[0] * in[1] * in[2]};
    }
  }
  throw std::logic_error("unreachable layer kind");
}

}  // namespace

Network build_network(const ArchConfig& arch, uint64_t seed) {
  if (arch.layers.empty()) throw std::invalid_argument("build_network: no layers");
  if (arch.num_classes < 2) throw std::invalid_argument("build_network: num_classes must be >= 2");

  const LayerSpec& head = arch.layers.back();
  if (head.kind != LayerKind::Dense)
    throw std::invalid_argument("build_network: last layer must be Dense, got " + head.describe());
  if (head.out_features != arch.num_classes)
    throw std::invalid_argument("build_network: head out_features " +
                                std::to_string(head.out_features) + " != num_classes " +
                                std::to_string(arch.num_classes));
  if (head.prunable)
    throw std::invalid_argument("build_network: classifier head must not be prunable");

  Network net;
  net.arch = arch;
  net.rng_seed = seed;

  std::vector<size_t> shape = {arch.input_shape[0], arch.input_shape[1], arch.input_shape[2]};
  long prev = -1;
  for (size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& s = arch.layers[i];
    if (!s.has_params() && s.prunable)
      throw std::invalid_argument("build_network: " + layer_tag(arch.layers, static_cast<long>(i)) +
                                  " has no parameters and cannot be prunable");
    net.in_shapes.push_back(shape);
    shape = chain_shape(arch.layers, i, prev, shape);
    net.out_shapes.push_back(shape);
    prev = static_cast<long>(i);
  }

  // Flat layout: per weighted layer, weights then bias.
  size_t off = 0;
  for (const LayerSpec& s : arch.layers) {
    ParamLayout pl;
    if (s.has_params()) {
      size_t wlen = s.kind == LayerKind::Dense
                        ? s.in_features * s.out_features
                        : s.out_channels * s.in_channels * s.kernel * s.kernel;
      pl.weight_offset = off;
      pl.weight_len = wlen;
      off += wlen;
      pl.bias_offset = off;
      pl.bias_len = s.units();
      off += pl.bias_len;
    } else {
      pl.weight_offset = pl.bias_offset = off;
    }
    net.params.layout.push_back(pl);
  }
  net.params.data.assign(off, 0.0);

  // Fan-in scaled uniform weights, zero biases; one derived stream per layer.
  for (size_t i = 0; i < arch.layers.size(); ++i) {
    const LayerSpec& s = arch.layers[i];
    if (!s.has_params()) continue;
    SplitMix64 rng(derive_seed(seed, seed_stream::kInit, i));
    double a = std::sqrt(6.0 / static_cast<double>(s.fan_in()));
    const ParamLayout& pl = net.params.layout[i];
    for (size_t k = 0; k < pl.weight_len; ++k) {
      net.params.data[pl.weight_offset + k] = rng.uniform(-a, a);
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

namespace {

void dense_forward(const LayerSpec& s, const double* w, const double* b, const Tensor& in,
                   Tensor& out) {
  size_t n_batch = in.shape[0];
  size_t fi = s.in_features, fo = s.out_features;
  for (size_t n = 0; n < n_batch; ++n) {
    const double* x = &in.data[n * fi];
    double* y = &out.data[n * fo];
    for (size_t o = 0; o < fo; ++o) {
      const double* wr = &w[o * fi];
      double acc = b[o];
      for (size_t i = 0; i < fi; ++i) acc += wr[i] * x[i];
      y[o] = acc;
    }
  }
}

void conv_forward(const LayerSpec& s, const double* w, const double* b, const Tensor& in,
                  Tensor& out) {
  size_t n_batch = in.shape[0];
  size_t ci = s.in_channels, hi = in.shape[2], wi = in.shape[3];
  size_t co = out.shape[1], ho = out.shape[2], wo = out.shape[3];
  size_t k = s.kernel;
  long pad = static_cast<long>(s.padding);
  long stride = static_cast<long>(s.stride);
  for (size_t n = 0; n < n_batch; ++n) {
    for (size_t oc = 0; oc < co; ++oc) {
      for (size_t oy = 0; oy < ho; ++oy) {
        for (size_t ox = 0; ox < wo; ++ox) {
          double acc = b[oc];
          long iy0 = static_cast<long>(oy) * stride - pad;
          long ix0 = static_cast<long>(ox) * stride - pad;
          for (size_t ic = 0; ic < ci; ++ic) {
            const double* wplane = &w[(oc * ci + ic) * k * k];
            const double* iplane = &in.data[(n * ci + ic) * hi * wi];
            for (size_t ky = 0; ky < k; ++ky) {
              long iy = iy0 + static_cast<long>(ky);
              if (iy < 0 || iy >= static_cast<long>(hi)) continue;
              for (size_t kx = 0; kx < k; ++kx) {
                long ix = ix0 + static_cast<long>(kx);
                if (ix < 0 || ix >= static_cast<long>(wi)) continue;
                acc += wplane[ky * k + kx] * iplane[iy * static_cast<long>(wi) + ix];
              }
            }
          }
          out.at4(n, oc, oy, ox) = acc;
        }
      }
    }
  }
}

void maxpool_forward(const LayerSpec& s, const Tensor& in, Tensor& out,
                     std::vector<size_t>& argmax) {
  size_t n_batch = in.shape[0];
  size_t c = in.shape[1], hi = in.shape[2], wi = in.shape[3];
  size_t ho = out.shape[2], wo = out.shape[3];
  size_t k = s.kernel, stride = s.stride;
  argmax.assign(out.numel(), 0);
  for (size_t n = 0; n < n_batch; ++n) {
    for (size_t ch = 0; ch < c; ++ch) {
      for (size_t oy = 0; oy < ho; ++oy) {
        for (size_t ox = 0; ox < wo; ++ox) {
          size_t iy0 = oy * stride, ix0 = ox * stride;
          size_t best_idx = in.idx4(n, ch, iy0, ix0);
          double best = in.data[best_idx];
          for (size_t ky = 0; ky < k; ++ky) {
            for (size_t kx = 0; kx < k; ++kx) {
              size_t idx = in.idx4(n, ch, iy0 + ky, ix0 + kx);
              if (in.data[idx] > best) {
                best = in.data[idx];
                best_idx = idx;
              }
            }
          }
          size_t oidx = out.idx4(n, ch, oy, ox);
          out.data[oidx] = best;
          argmax[oidx] = best_idx;
        }
      }
    }
  }
}

std::vector<size_t> batch_shape(const std::vector<size_t>& sample, size_t n) {
  std::vector<size_t> s;
  s.push_back(n);
  s.insert(s.end(), sample.begin(), sample.end());
  return s;
}

}  // namespace

ForwardTrace forward(const Network& net, const Tensor& batch) {
  std::vector<size_t> expect = batch_shape(net.in_shapes[0], batch.shape.empty() ? 0 : batch.shape[0]);
  if (batch.shape != expect) {
    throw std::invalid_argument("forward: input shape mismatch, expected " +
                                shape_to_string(expect) + " but got " +
                                shape_to_string(batch.shape));
  }
  size_t n = batch.shape[0];

  ForwardTrace trace;
  trace.acts.reserve(net.num_layers() + 1);
  trace.acts.push_back(batch);
  trace.pool_argmax.assign(net.num_layers(), {});

  for (size_t i = 0; i < net.num_layers(); ++i) {
    const LayerSpec& s = net.arch.layers[i];
    const ParamLayout& pl = net.params.layout[i];
    const double* w = net.params.data.data() + pl.weight_offset;
    const double* b = net.params.data.data() + pl.bias_offset;
    const Tensor& in = trace.acts.back();
    Tensor out(batch_shape(net.out_shapes[i], n));

    switch (s.kind) {
      case LayerKind::Dense:
        dense_forward(s, w, b, in, out);
        break;
      case LayerKind::Conv2D:
        conv_forward(s, w, b, in, out);
        break;
      case LayerKind::ReLU:
        for (size_t j = 0; j < in.numel(); ++j) out.data[j] = in.data[j] > 0.0 ? in.data[j] : 0.0;
        break;
      case LayerKind::MaxPool2D:
        maxpool_forward(s, in, out, trace.pool_argmax[i]);
        break;
      case LayerKind::GlobalAvgPool: {
        size_t c = in.shape[1], area = in.shape[2] * in.shape[3];
        double inv = 1.0 / static_cast<double>(area);
        for (size_t bn = 0; bn < n; ++bn) {
          for (size_t ch = 0; ch < c; ++ch) {
            const double* p = &in.data[(bn * c + ch) * area];
            double acc = 0.0;
            for (size_t j = 0; j < area; ++j) acc += p[j];
            out.at2(bn, ch) = acc * inv;
          }
        }
        break;
      }
      case LayerKind::Flatten:
        out.data = in.data;  // row-major C,H,W flattening is a straight copy
        break;
    }
    trace.acts.push_back(std::move(out));
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Backward
// ---------------------------------------------------------------------------

namespace {

void dense_backward(const LayerSpec& s, const double* w, const Tensor& in, const Tensor& dout,
                    Tensor& din, double* dw, double* db) {
  size_t n_batch = in.shape[0];
  size_t fi = s.in_features, fo = s.out_features;
  for (size_t n = 0; n < n_batch; ++n) {
    const double* x = &in.data[n * fi];
    const double* dy = &dout.data[n * fo];
    double* dx = &din.data[n * fi];
    for (size_t o = 0; o < fo; ++o) {
      double g = dy[o];
      if (g == 0.0) continue;
      const double* wr = &w[o * fi];
      double* dwr = &dw[o * fi];
      db[o] += g;
      for (size_t i = 0; i < fi; ++i) {
        dwr[i] += g * x[i];
        dx[i] += g * wr[i];
      }
    }
  }
}

void conv_backward(const LayerSpec& s, const double* w, const Tensor& in, const Tensor& dout,
                   Tensor& din, double* dw, double* db) {
  size_t n_batch = in.shape[0];
  size_t ci = s.in_channels, hi = in.shape[2], wi = in.shape[3];
  size_t co = dout.shape[1], ho = dout.shape[2], wo = dout.shape[3];
  size_t k = s.kernel;
  long pad = static_cast<long>(s.padding);
  long stride = static_cast<long>(s.stride);
  for (size_t n = 0; n < n_batch; ++n) {
    for (size_t oc = 0; oc < co; ++oc) {
      for (size_t oy = 0; oy < ho; ++oy) {
        for (size_t ox = 0; ox < wo; ++ox) {
          double g = dout.at4(n, oc, oy, ox);
          if (g == 0.0) continue;
          db[oc] += g;
          long iy0 = static_cast<long>(oy) * stride - pad;
          long ix0 = static_cast<long>(ox) * stride - pad;
          for (size_t ic = 0; ic < ci; ++ic) {
            const double* wplane = &w[(oc * ci + ic) * k * k];
            double* dwplane = &dw[(oc * ci + ic) * k * k];
            const double* iplane = &in.data[(n * ci + ic) * hi * wi];
            double* diplane = &din.data[(n * ci + ic) * hi * wi];
            for (size_t ky = 0; ky < k; ++ky) {
              long iy = iy0 + static_cast<long>(ky);
              if (iy < 0 || iy >= static_cast<long>(hi)) continue;
              for (size_t kx = 0; kx < k; ++kx) {
                long ix = ix0 + static_cast<long>(kx);
                if (ix < 0 || ix >= static_cast<long>(wi)) continue;
                size_t ii = static_cast<size_t>(iy) * wi + static_cast<size_t>(ix);
                dwplane[ky * k + kx] += g * iplane[ii];
                diplane[ii] += g * wplane[ky * k + kx];
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace

BackwardResult backward_full(const Network& net, const ForwardTrace& trace,
                             const Tensor& loss_grad) {
  if (trace.acts.size() != net.num_layers() + 1) {
    throw std::invalid_argument("backward: trace has " + std::to_string(trace.acts.size()) +
                                " activations but network has " +
                                std::to_string(net.num_layers()) + " layers");
  }
  if (loss_grad.shape != trace.logits().shape) {
    throw std::invalid_argument("backward: loss_grad shape " + shape_to_string(loss_grad.shape) +
                                " != logits shape " + shape_to_string(trace.logits().shape));
  }

  BackwardResult res;
  res.param_grads.layout = net.params.layout;
  res.param_grads.data.assign(net.params.size(), 0.0);
  res.act_grads.resize(trace.acts.size());
  res.act_grads.back() = loss_grad;

  for (size_t li = net.num_layers(); li-- > 0;) {
    const LayerSpec& s = net.arch.layers[li];
    const ParamLayout& pl = net.params.layout[li];
    const double* w = net.params.data.data() + pl.weight_offset;
    double* dw = res.param_grads.data.data() + pl.weight_offset;
    double* db = res.param_grads.data.data() + pl.bias_offset;
    const Tensor& in = trace.acts[li];
    const Tensor& dout = res.act_grads[li + 1];
    Tensor din(in.shape);

    switch (s.kind) {
      case LayerKind::Dense:
        dense_backward(s, w, in, dout, din, dw, db);
        break;
      case LayerKind::Conv2D:
        conv_backward(s, w, in, dout, din, dw, db);
        break;
      case LayerKind::ReLU:
        for (size_t j = 0; j < in.numel(); ++j)
          din.data[j] = in.data[j] > 0.0 ? dout.data[j] : 0.0;
        break;
      case LayerKind::MaxPool2D: {
        const std::vector<size_t>& arg = trace.pool_argmax[li];
        for (size_t j = 0; j < dout.numel(); ++j) din.data[arg[j]] += dout.data[j];
        break;
      }
      case LayerKind::GlobalAvgPool: {
        size_t c = in.shape[1], area = in.shape[2] * in.shape[3];
        double inv = 1.0 / static_cast<double>(area);
        size_t n_batch = in.shape[0];
        for (size_t n = 0; n < n_batch; ++n) {
          for (size_t ch = 0; ch < c; ++ch) {
            double g = dout.at2(n, ch) * inv;
            double* p = &din.data[(n * c + ch) * area];
            for (size_t j = 0; j < area; ++j) p[j] = g;
          }
        }
        break;
      }
      case LayerKind::Flatten:
        din.data = dout.data;
        break;
    }
    res.act_grads[li] = std::move(din);
  }
  return res;
}

ParamVector backward(const Network& net, const ForwardTrace& trace, const Tensor& loss_grad) {
  return backward_full(net, trace, loss_grad).param_grads;
}

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

std::vector<ComponentId> enumerate_components(const Network& net) {
  std::vector<ComponentId> out;
  for (size_t i = 0; i < net.num_layers(); ++i) {
    const LayerSpec& s = net.arch.layers[i];
    if (!s.prunable || !s.has_params()) continue;
    for (size_t u = 0; u < s.units(); ++u) out.push_back({i, u});
  }
  return out;
}

std::vector<size_t> component_param_slice(const Network& net, ComponentId c) {
  if (c.layer_index >= net.num_layers())
    throw std::invalid_argument("component_param_slice: layer index out of range");
  const LayerSpec& s = net.arch.layers[c.layer_index];
  if (!s.has_params() || c.unit_index >= s.units())
    throw std::invalid_argument("component_param_slice: invalid component (layer " +
                                std::to_string(c.layer_index) + ", unit " +
                                std::to_string(c.unit_index) + ")");
  const ParamLayout& pl = net.params.layout[c.layer_index];
  size_t per_unit = s.fan_in();  // weight row (Dense) or filter (Conv2D)
  std::vector<size_t> idx;
  idx.reserve(per_unit + 1);
  size_t base = pl.weight_offset + c.unit_index * per_unit;
  for (size_t k = 0; k < per_unit; ++k) idx.push_back(base + k);
  idx.push_back(pl.bias_offset + c.unit_index);
  return idx;
}

// ---------------------------------------------------------------------------
// Checkpoint
// ---------------------------------------------------------------------------

namespace {

json layer_to_json(const LayerSpec& s) {
  json j;
  j["kind"] = layer_kind_name(s.kind);
  switch (s.kind) {
    case LayerKind::Dense:
      j["in_features"] = s.in_features;
      j["out_features"] = s.out_features;
      j["prunable"] = s.prunable;
      break;
    case LayerKind::Conv2D:
      j["in_channels"] = s.in_channels;
      j["out_channels"] = s.out_channels;
      j["kernel"] = s.kernel;
      j["stride"] = s.stride;
      j["padding"] = s.padding;
      j["prunable"] = s.prunable;
      break;
    case LayerKind::MaxPool2D:
      j["kernel"] = s.kernel;
      j["stride"] = s.stride;
      break;
    default:
      break;
  }
  return j;
}

LayerSpec layer_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "Dense")
    return LayerSpec::dense(j.at("in_features"), j.at("out_features"), j.at("prunable"));
  if (kind == "Conv2D")
    return LayerSpec::conv2d(j.at("in_channels"), j.at("out_channels"), j.at("kernel"),
                             j.at("stride"), j.at("padding"), j.at("prunable"));
  if (kind == "ReLU") return LayerSpec::relu();
  if (kind == "MaxPool2D") return LayerSpec::maxpool2d(j.at("kernel"), j.at("stride"));
  if (kind == "GlobalAvgPool") return LayerSpec::global_avg_pool();
  if (kind == "Flatten") return LayerSpec::flatten();
  throw std::runtime_error("checkpoint: unknown layer kind '" + kind + "'");
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& path) {
  json header;
  header["format"] = "fedx-checkpoint";
  header["version"] = 1;
  header["seed"] = net.rng_seed;
  header["input_shape"] = net.arch.input_shape;
  header["num_classes"] = net.arch.num_classes;
  json layers = json::array();
  for (const LayerSpec& s : net.arch.layers) layers.push_back(layer_to_json(s));
  header["layers"] = layers;
  header["param_count"] = net.params.size();

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_checkpoint: cannot open " + path);
  f << header.dump() << "\n";
  static_assert(sizeof(double) == 8);
  f.write(reinterpret_cast<const char*>(net.params.data.data()),
          static_cast<std::streamsize>(8 * net.params.size()));
  if (!f) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Network load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("load_checkpoint: missing header in " + path);
  json header = json::parse(line);
  if (header.at("format") != "fedx-checkpoint" || header.at("version") != 1)
    throw std::runtime_error("load_checkpoint: unsupported format/version in " + path);

  ArchConfig arch;
  auto in = header.at("input_shape");
  arch.input_shape = {in.at(0).get<size_t>(), in.at(1).get<size_t>(), in.at(2).get<size_t>()};
  arch.num_classes = header.at("num_classes");
  for (const json& lj : header.at("layers")) arch.layers.push_back(layer_from_json(lj));

  Network net = build_network(arch, header.at("seed").get<uint64_t>());
  size_t count = header.at("param_count");
  if (count != net.params.size())
    throw std::runtime_error("load_checkpoint: param_count " + std::to_string(count) +
                             " does not match layer specs (" + std::to_string(net.params.size()) +
                             ")");
  f.read(reinterpret_cast<char*>(net.params.data.data()),
         static_cast<std::streamsize>(8 * count));
  if (f.gcount() != static_cast<std::streamsize>(8 * count))
    throw std::runtime_error("load_checkpoint: truncated parameter block in " + path);
  return net;
}

// ---------------------------------------------------------------------------
// Operation counters
// ---------------------------------------------------------------------------

uint64_t forward_macs(const Network& net) {
  uint64_t macs = 0;
  for (size_t i = 0; i < net.num_layers(); ++i) {
    const LayerSpec& s = net.arch.layers[i];
    const std::vector<size_t>& out = net.out_shapes[i];
    if (s.kind == LayerKind::Dense) {
      macs += static_cast<uint64_t>(s.in_features) * s.out_features;
    } else if (s.kind == LayerKind::Conv2D) {
      macs += static_cast<uint64_t>(out[0]) * out[1] * out[2] * s.in_channels * s.kernel * s.kernel;
    }
  }
  return macs;
}

uint64_t backward_macs(const Network& net) {
  // Input-gradient plus weight-gradient accumulation per weighted layer.
  return 2 * forward_macs(net);
}

}  // namespace fedx
