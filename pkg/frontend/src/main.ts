import { App } from "./app.js";

const root = document.getElementById("app");
if (!root) throw new Error("page shell is missing #app");
const app = new App(root, (input, init) => fetch(input, init));
void app.newGame(5, "solitaire");
