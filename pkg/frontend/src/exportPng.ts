/** Client-side PNG export: fetch the server-rendered SVG, rasterize it on an
 * offscreen canvas at an integer scale factor, and hand the blob to the
 * browser as a download. Browser primitives are injectable so the flow can
 * be tested without a real canvas. */

import type { ApiClient } from "./api.js";

/** Logical figure size; the canvas is this times the scale factor. */
export const BASE_WIDTH = 1200;
export const BASE_HEIGHT = 900;

export interface ExportDeps {
  loadImage(url: string): Promise<CanvasImageSource>;
  createCanvas(width: number, height: number): HTMLCanvasElement;
  makeObjectUrl(blob: Blob): string;
  revokeObjectUrl(url: string): void;
  download(blob: Blob, filename: string): void;
  now(): Date;
}

export function browserDeps(): ExportDeps {
  return {
    loadImage(url) {
      return new Promise((resolve, reject) => {
        const img = new Image();
        img.onload = () => resolve(img);
        img.onerror = () => reject(new Error("could not decode exported SVG"));
        img.src = url;
      });
    },
    createCanvas(width, height) {
      const canvas = document.createElement("canvas");
      canvas.width = width;
      canvas.height = height;
      return canvas;
    },
    makeObjectUrl(blob) {
      return URL.createObjectURL(blob);
    },
    revokeObjectUrl(url) {
      URL.revokeObjectURL(url);
    },
    download(blob, filename) {
      const url = URL.createObjectURL(blob);
      const link = document.createElement("a");
      link.href = url;
      link.download = filename;
      document.body.appendChild(link);
      link.click();
      link.remove();
      URL.revokeObjectURL(url);
    },
    now() {
      return new Date();
    },
  };
}

function timestamp(d: Date): string {
  const pad = (v: number) => String(v).padStart(2, "0");
  return (
    `${d.getFullYear()}${pad(d.getMonth() + 1)}${pad(d.getDate())}` +
    `T${pad(d.getHours())}${pad(d.getMinutes())}${pad(d.getSeconds())}`
  );
}

/** Exports the session's current view as `<dataset>-<timestamp>.png`.
 * Returns true when a download was handed to the browser. On any failure
 * (HTTP error, decode error, canvas unavailable) it reports through `toast`
 * and starts no download. */
export async function exportPng(
  api: ApiClient,
  sessionId: string,
  dataset: string,
  scale: number,
  toast: (message: string) => void,
  deps: ExportDeps = browserDeps(),
): Promise<boolean> {
  let svgText: string;
  try {
    svgText = await api.exportSvg(sessionId, BASE_WIDTH, BASE_HEIGHT);
  } catch (err) {
    toast(`export failed: ${err instanceof Error ? err.message : String(err)}`);
    return false;
  }
  const svgBlob = new Blob([svgText], { type: "image/svg+xml;charset=utf-8" });
  const url = deps.makeObjectUrl(svgBlob);
  try {
    const image = await deps.loadImage(url);
    const canvas = deps.createCanvas(BASE_WIDTH * scale, BASE_HEIGHT * scale);
    const ctx = canvas.getContext("2d");
    if (!ctx) {
      toast("export failed: canvas unavailable");
      return false;
    }
    ctx.drawImage(image, 0, 0, canvas.width, canvas.height);
    const blob = await new Promise<Blob | null>((resolve) => canvas.toBlob(resolve, "image/png"));
    if (!blob) {
      toast("export failed: could not encode PNG");
      return false;
    }
    deps.download(blob, `${dataset}-${timestamp(deps.now())}.png`);
    return true;
  } catch (err) {
    toast(`export failed: ${err instanceof Error ? err.message : String(err)}`);
    return false;
  } finally {
    deps.revokeObjectUrl(url);
  }
}
