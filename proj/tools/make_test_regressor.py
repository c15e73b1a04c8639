"""Writes the tiny ONNX regressor used by the tracker tests.

The network maps (target, search) crops to a box that is the center half of
the search crop, shifted right by a fraction proportional to the mean search
intensity difference from the target, so the output depends on both inputs.
"""
import json
import sys
from pathlib import Path

import torch


class CenterRegressor(torch.nn.Module):
    # Pool -> concat -> 1x1 conv -> flatten keeps to ops every ONNX importer handles.
    def __init__(self):
        super().__init__()
        self.pool = torch.nn.AdaptiveAvgPool2d(1)
        self.head = torch.nn.Conv2d(6, 4, 1)
        with torch.no_grad():
            self.head.weight.zero_()
            for c in range(3):
                for out in (0, 2):
                    self.head.weight[out, c] = -0.5 / 3
                    self.head.weight[out, 3 + c] = 0.5 / 3
            self.head.bias.copy_(torch.tensor([0.25, 0.25, 0.75, 0.75]))

    def forward(self, target, search):
        pooled = torch.cat([self.pool(target), self.pool(search)], dim=1)
        return torch.flatten(self.head(pooled), 1)


def main(out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model_path = out / "center_regressor.onnx"
    example = (torch.zeros(1, 3, 16, 16), torch.zeros(1, 3, 16, 16))
    torch.onnx.export(CenterRegressor(), example, str(model_path), input_names=["target", "search"],
                      output_names=["box"], opset_version=11, dynamo=False)
    sidecar = {"input_size": [16, 16], "inputs": ["target", "search"], "output": "box"}
    Path(str(model_path) + ".json").write_text(json.dumps(sidecar) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data")
