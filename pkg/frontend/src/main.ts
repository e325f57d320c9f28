import { ApiClient } from "./api.js";
import { App } from "./app.js";

const root = document.getElementById("app");
if (root instanceof HTMLElement) {
  const app = new App(new ApiClient(""));
  void app.mount(root);
}
